"""Random and model-generated price–consumption datasets."""

from fractions import Fraction as F
from itertools import product

from hypothesis import strategies as st

from invpref.price import PriceDataset, dot


@st.composite
def datasets(draw, max_obs=6, max_dim=4):
    L = draw(st.integers(1, max_dim))
    k = draw(st.integers(1, max_obs))
    price = st.lists(st.integers(1, 5), min_size=L, max_size=L)
    qty = st.lists(st.integers(0, 5), min_size=L, max_size=L).filter(any)
    rows = [(draw(price), draw(qty)) for _ in range(k)]
    return PriceDataset.from_rows(rows)


def random_dataset(rng, max_obs=6, max_dim=4):
    L = rng.randint(1, max_dim)
    k = rng.randint(1, max_obs)
    rows = []
    for _ in range(k):
        p = [rng.randint(1, 5) for _ in range(L)]
        x = [rng.randint(0, 5) for _ in range(L)]
        if not any(x):
            x[rng.randrange(L)] = 1
        rows.append((p, x))
    return PriceDataset.from_rows(rows)


# generate-from-model datasets


def quasilinear_data(rng, k, L):
    """Choices maximizing v(y) + t on a grid of y, with concave v and numeraire t."""
    a = [F(rng.randint(2, 8)) for _ in range(L - 1)]
    b = [F(rng.randint(1, 3)) for _ in range(L - 1)]
    grid = list(product(range(5), repeat=L - 1))

    def v(y):
        return sum((ai * yi - bi * yi * yi / 2 for ai, bi, yi in zip(a, b, y)), F(0))

    rows = []
    for _ in range(k):
        p = [F(rng.randint(1, 6)) for _ in range(L)]
        tilde = [c / p[-1] for c in p[:-1]]
        y = max(grid, key=lambda g: v(g) - dot(tilde, [F(c) for c in g]))
        m = F(100)
        t = (m - dot(p[:-1], [F(c) for c in y])) / p[-1]
        rows.append((p, [F(c) for c in y] + [t]))
    return PriceDataset.from_rows(rows)


def cobb_douglas_data(rng, k, L):
    """x_l = α_l·m/p_l with α summing to one."""
    w = [rng.randint(1, 5) for _ in range(L)]
    alpha = [F(c, sum(w)) for c in w]
    rows = []
    for _ in range(k):
        p = [F(rng.randint(1, 6)) for _ in range(L)]
        m = F(rng.randint(5, 40))
        rows.append((p, [al * m / pl for al, pl in zip(alpha, p)]))
    return PriceDataset.from_rows(rows)


def translation_data(rng, k, L):
    """Maximizers of π·x − ½Σ(x_s − x̄)², which is shifted by a constant under x ↦ x + t·1."""
    w = [rng.randint(1, 5) for _ in range(L)]
    pi = [F(c, sum(w)) for c in w]
    rows = []
    for _ in range(k):
        p = [F(rng.randint(1, 6)) for _ in range(L)]
        norm = sum(p)
        d = [pi_s - ps / norm for pi_s, ps in zip(pi, p)]
        m = F(rng.randint(50, 100))
        xbar = (m - dot(p, d)) / norm
        rows.append((p, [ds + xbar for ds in d]))
    return PriceDataset.from_rows(rows)
