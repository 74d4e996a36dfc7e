"""ADHM and monad matrix models of instanton moduli spaces."""

import json as _json

from ._adhmkit import *  # noqa: F401,F403
from ._adhmkit import (
    charge_integral as _charge_integral,
    verify_null_homotopy_p2 as _verify_p2,
    verify_null_homotopy_s4 as _verify_s4,
)


def charge_integral(m, radius=6.0, samples=200000, seed=1):
    return _json.loads(_charge_integral(m, radius, samples, seed))


def verify_null_homotopy_s4(m, zeta):
    return _json.loads(_verify_s4(m, zeta))


def verify_null_homotopy_p2(m, zeta):
    return _json.loads(_verify_p2(m, zeta))
