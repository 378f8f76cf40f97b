from hypothesis import strategies as st

from localorder.pstruct import PnStructure
from localorder.tournaments import Tournament


@st.composite
def tournaments(draw, min_n=0, max_n=6):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    rows = [[False] * n for _ in range(n)]
    it = iter(bits)
    for i in range(n):
        for j in range(i + 1, n):
            if next(it):
                rows[i][j] = True
            else:
                rows[j][i] = True
    return Tournament(tuple(tuple(r) for r in rows))


@st.composite
def permutations_of(draw, n):
    return tuple(draw(st.permutations(list(range(n)))))


def words(min_size=1, max_size=6, n_parts=2):
    return st.lists(st.integers(1, n_parts), min_size=min_size, max_size=max_size).map(
        lambda p: PnStructure(tuple(p), n_parts)
    )
