import hypothesis.strategies as st
from hypothesis import settings

from linorder.epseq import canonicalize

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


class Raw:
    """An uncanonicalized (prefix, period) pair, readable by the oracles."""

    def __init__(self, prefix, period):
        self.prefix = tuple(prefix)
        self.period = tuple(period)

    def __repr__(self):
        return f"Raw({self.prefix}|{self.period})"


def raw_seqs(letters, max_prefix=6, max_period=5):
    letter = st.sampled_from(list(letters))
    return st.builds(
        Raw,
        st.lists(letter, max_size=max_prefix),
        st.lists(letter, min_size=1, max_size=max_period),
    )


def ep_seqs(base, letters, max_prefix=6, max_period=5):
    return raw_seqs(letters, max_prefix, max_period).map(lambda r: canonicalize(base, r.prefix, r.period))
