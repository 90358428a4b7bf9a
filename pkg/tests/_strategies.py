from fractions import Fraction

from hypothesis import strategies as st

from slpreduce.densepoly import DensePoly
from slpreduce.slp_core import Slp

KINDS = ("add", "sub", "mul")


@st.composite
def programs(draw, max_len=30, max_muls=None):
    n = draw(st.integers(0, max_len))
    ops = []
    muls = 0
    for i in range(2, n + 2):
        kind = draw(st.sampled_from(KINDS))
        if kind == "mul" and max_muls is not None and muls >= max_muls:
            kind = "add"
        muls += kind == "mul"
        ops.append((kind, draw(st.integers(0, i - 1)), draw(st.integers(0, i - 1))))
    out = draw(st.integers(0, n + 1))
    return Slp(tuple(ops), out)


def rationals(max_num=50, max_den=20):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def int_polys(max_deg=8, bound=20, allow_zero=True):
    p = st.lists(st.integers(-bound, bound), min_size=0 if allow_zero else 1,
                 max_size=max_deg + 1).map(DensePoly)
    return p if allow_zero else p.filter(lambda f: not f.is_zero)


def rat_polys(max_deg=6):
    return st.lists(rationals(30, 6), max_size=max_deg + 1).map(DensePoly)
