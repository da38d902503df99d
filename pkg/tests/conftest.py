import mpmath as mp

from zonalpd.jacobi import dim_m_n, eigenvalue_lambda_n, jacobi_value_at_one
from zonalpd.spaces import make_space
from zonalpd.transform import CoefficientEntry, CoefficientReport

# every space with a named catalog entry
CATALOG = ("S2", "S4", "RP2", "RP3", "RP4", "CP2", "CP3", "HP2", "OP2")
# the ones with a concrete point model (OP2 is zonal-only)
SAMPLED = ("S2", "S4", "RP2", "RP3", "RP4", "CP2", "CP3", "HP2")


def synthetic_report(space_name, values, errors=None, signs=None, kernel="synthetic"):
    """Assemble a CoefficientReport by hand for classifier and synthesis tests."""
    space = make_space(space_name)
    n_max = len(values) - 1
    entries = []
    for n, v in enumerate(values):
        e = mp.mpf(errors[n]) if errors is not None else mp.mpf("1e-30")
        if signs is not None:
            sgn = signs[n]
        else:
            v = mp.mpf(v)
            sgn = "+" if v > e else ("-" if v < -e else "0")
        entries.append(
            CoefficientEntry(
                n=n,
                value=mp.mpf(v),
                error=e,
                m_n=float(dim_m_n(space, n)),
                lambda_n=eigenvalue_lambda_n(space, n),
                sign=sgn,
            )
        )
    return CoefficientReport(
        space=space,
        kernel=kernel,
        N=n_max,
        entries=tuple(entries),
        method="both",
        levels={"digits": 30},
    )


def p_at_one(space_name, n):
    return float(jacobi_value_at_one(make_space(space_name), n))
