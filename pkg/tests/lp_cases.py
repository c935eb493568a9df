"""Random small LPs in LpProblem form, with the oracle's dense view."""
import numpy as np

from aggrex.lp import EQ, GE, LE, LpProblem


def random_lp(rng, box=10.0):
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 6))
    pb = LpProblem("rand")
    lbs = rng.choice([0.0, -box / 2], size=n)
    ubs = np.full(n, box)
    cols = [pb.add_var(f"x{j}", lbs[j], ubs[j], float(rng.integers(-5, 6))) for j in range(n)]
    dense_rows, dense_rhs = [], []
    for i in range(m):
        coefs = rng.integers(-4, 5, size=n).astype(float)
        rhs = float(rng.integers(-5, 15))
        sense = [LE, GE, EQ][int(rng.integers(0, 3)) if rng.random() < 0.8 else 2]
        pb.add_constraint({cols[j]: coefs[j] for j in range(n) if coefs[j] != 0}, sense, rhs, f"r{i}")
        if sense in (LE, EQ):
            dense_rows.append(coefs)
            dense_rhs.append(rhs)
        if sense in (GE, EQ):
            dense_rows.append(-coefs)
            dense_rhs.append(-rhs)
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        dense_rows += [e, -e]
        dense_rhs += [ubs[j], -lbs[j]]
    return pb, pb.cost.copy(), np.array(dense_rows), np.array(dense_rhs), n
