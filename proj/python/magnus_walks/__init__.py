"""Python interface to the magnus C++ library."""

import json
from fractions import Fraction

from . import _core
from ._core import BudgetExceeded, ParseError, schema_version, witt_degree, words_equal

__all__ = [
    "BudgetExceeded",
    "ParseError",
    "schema_version",
    "normalize_word",
    "group_info",
    "embed",
    "flow",
    "words_equal",
    "return_probability",
    "return_probability_mc",
    "check_exclusive",
    "phi_profile",
    "gamma",
    "witt_degree",
    "dirichlet_box",
    "selftest",
]


def normalize_word(word, rank=2):
    return _core.normalize_word(word, rank)


def group_info(group):
    spec, rank = _core.group_info(group)
    return {"spec": spec, "rank": rank}


def embed(group, word):
    return json.loads(_core.embed_json(group, word))


def flow(group, word):
    return json.loads(_core.flow_json(group, word))


def return_probability(group, measure, n, budget=5_000_000):
    num, den = _core.return_probability_exact(group, measure, n, budget)
    return Fraction(int(num), int(den))


def return_probability_mc(group, measure, n, trials, seed, threads=0, z=1.96):
    return _core.return_probability_mc(group, measure, n, trials, seed, threads, z)


def check_exclusive(group, gamma, rho, split, membership="", radius=4):
    return json.loads(_core.check_exclusive_json(group, list(gamma), rho, split, membership, radius))


def phi_profile(family, params, n):
    exponent, value = _core.phi_profile(family, list(params), n)
    return {"exponent": exponent, "value": value}


def gamma(volume, t):
    log_gamma, value = _core.gamma(volume, t)
    return {"log_gamma": log_gamma, "gamma": value}


def dirichlet_box(group, measure, k, budget=1_000_000):
    lam, bound = _core.dirichlet_box(group, measure, k, budget)
    return {"lambda1": lam, "test_function_bound": bound}


def selftest(only=(), seed=20240611):
    return _core.selftest(list(only), seed)
