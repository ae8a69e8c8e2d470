"""Verification suites: defaults, runs and pass/fail checks.

Every suite returns rows shaped ``{quantity, x, estimate, prediction, stderr,
pass}`` and a list of named checks; the suite passes when every check does.
"""
import logging
import math

import numpy as np

from ..const import STDERR_WIDTH
from ..kesten import density_table, phi_cdf, phi_inf, tail_cutoff
from ..models import Budgets, EnvLaw
from ..utils import LltMethod, Suites, binomial_stderr, combined_stderr, within
from .coupling import coupling_experiment, same_parity
from .estimators import (
    b_h_disagreement,
    check_renewal_identity,
    conditioned_law_check,
    estimate_bh_law,
    estimate_c_constants,
    estimate_slope_moments,
    monotone_violations,
    race_probabilities,
)
from .events import event_frequencies
from .sinai_llt import verify_sinai_llt

_LOGGER = logging.getLogger(__name__)

SUITE_DEFAULTS = {
    Suites.DENSITY: {"from": -5.0, "to": 5.0, "step": 0.01, "tol": 1e-10},
    Suites.BH_LLT: {
        "h_grid": [8.0, 20.0],
        "N": 100000,
        "x_grid": None,
        "D_cap": 0.2,
        "disagreement_h_grid": [8.0, 16.0, 32.0],
        "disagreement_N": 10000,
        "disagreement_cap": 1.0,
    },
    Suites.RENEWAL: {"h": 12.0, "N": 200000, "x_grid": [0, 36, -36, 72, -72, 144, -144]},
    Suites.SLOPES: {
        "h": 16.0,
        "ratio_h": 10.0,
        "N": 100000,
        "delta_multiples": [2.0, 4.0, 8.0],
        "excess_spread": 3.0,
        "conditioned_h": 12.0,
        "conditioned_N": 10000,
    },
    Suites.CONSTANTS: {
        "h_grid": [20.0],
        "N": 1000000,
        "x_grid": [1000, 10000],
        "positive_range": [0.47, 0.53],
        "spitzer_tolerance": 0.15,
    },
    Suites.EVENTS: {"n_grid": [16384, 1048576], "N": 1000, "z": 0, "events": "strict"},
    Suites.COUPLING: {"n": 1048576, "N": 200, "z": 0, "events": "strict", "max_environments": 20000},
    Suites.SINAI_LLT: {
        "proxy_n_grid": [16384, 1048576],
        "proxy_N": 100000,
        "z_grid": [-8, -4, 0, 4, 8],
        "dp_n": 2000,
        "dp_N": 10000,
        "dp_z_grid": [-40, -20, -10, 0, 10, 20, 40],
        "events": "strict",
    },
}


def _row(quantity, x=None, estimate=None, prediction=None, stderr=None, passed=None) -> dict:
    return {
        "quantity": quantity,
        "x": x,
        "estimate": estimate,
        "prediction": prediction,
        "stderr": stderr,
        "pass": passed,
    }


def _check(name: str, passed: bool, detail: str = "") -> dict:
    return {"name": name, "pass": bool(passed), "detail": detail}


def _preset(events) -> str:
    """Label of the event constants a suite ran with, for its row names."""
    if isinstance(events, dict):
        return events.get("preset", "strict") + "+custom"
    return str(events)


def run_density(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    tol = params["tol"]
    table = density_table(params["from"], params["to"], params["step"], tol)
    rows = [_row("phi", entry["x"], entry["phi"], None, entry["error_bound"]) for entry in table]
    at_zero = phi_inf(0.0, tol).value
    total = phi_cdf(tail_cutoff(tol), tol)
    by_x = {entry["x"]: entry["phi"] for entry in table}
    symmetric = all(by_x[-x] == value for x, value in by_x.items() if -x in by_x)
    right = [entry["phi"] for entry in table if entry["x"] >= 0]
    monotone = all(b <= a + 2 * tol for a, b in zip(right, right[1:]))
    honest = True
    for x in np.linspace(0.05, 5.0, 25):
        coarse, fine = phi_inf(x, tol), phi_inf(x, tol / 100)
        honest &= abs(coarse.value - fine.value) <= coarse.error_bound + 1e-15
    rows.append(_row("phi(0)", 0.0, at_zero, 0.5, None, abs(at_zero - 0.5) <= 1e-12))
    rows.append(_row("integral of phi", None, total, 1.0, None, abs(total - 1.0) <= 1e-8))
    checks = [
        _check("phi(0) = 1/2", abs(at_zero - 0.5) <= 1e-12),
        _check("normalization", abs(total - 1.0) <= 1e-8, "integral=" + repr(total)),
        _check("symmetry", symmetric),
        _check("nonincreasing on [0, inf)", monotone),
        _check("error bound honesty", honest),
    ]
    return rows, checks


def run_bh_llt(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    rows, checks, distances = [], [], []
    for h in params["h_grid"]:
        result = estimate_bh_law(law, h, params["N"], seed, params["x_grid"], threads, budgets.sites)
        for entry in result["rows"]:
            label = "P(b_h=x) h=" + str(h)
            rows.append(_row(label, entry["x"], entry["estimate"], entry["prediction"], entry["stderr"]))
        rows.append(_row("D(h)", h, result["D"]))
        rows.append(_row("P(b_h>0)", h, result["positive"].estimate, 0.5, result["positive"].stderr))
        distances.append(result["D"])
        violations = monotone_violations(result["rows"])
        accounted = sum(entry["count"] for entry in result["rows"]) + result["overflow"] + result["excluded"]
        checks.append(_check("histogram accounting h=" + str(h), accounted == params["N"]))
        checks.append(_check("monotone histogram h=" + str(h), not violations, str(violations)))
        checks.append(_check("exclusion rate h=" + str(h), result["excluded"] < 1e-3 * params["N"]))
    if len(distances) > 1:
        checks.append(_check("D decreases", distances[-1] < distances[0], str(distances)))
    checks.append(_check("D cap", distances[-1] <= params["D_cap"], str(distances[-1])))
    cap = params["disagreement_cap"]
    for entry in b_h_disagreement(
        law, params["disagreement_h_grid"], params["disagreement_N"], seed, threads, budgets.sites
    ):
        bounded = entry["estimate"] <= cap
        rows.append(_row("h P(b_h != b_h^K)", entry["h"], entry["estimate"], cap, entry["stderr"], bounded))
        checks.append(_check("disagreement bound h=" + str(entry["h"]), bounded, repr(entry["estimate"])))
    return rows, checks


def run_renewal(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    result = check_renewal_identity(law, params["h"], params["N"], seed, params["x_grid"], threads, budgets.sites)
    rows = [
        _row("P(b_h=x) vs renewal", entry["x"], entry["lhs"], entry["rhs"], entry["stderr"], entry["pass"])
        for entry in result["rows"]
    ]
    zero, up = result["zero"], result["up_mean"]
    zero_ok = within(zero["estimate"], zero["prediction"], zero["stderr"], STDERR_WIDTH)
    up_ok = within(up["estimate"], up["prediction"], up["stderr"], STDERR_WIDTH)
    rows.append(_row("P(b_h=0) E[l(T_up)+l(T_down)]", 0, zero["estimate"], 1.0, zero["stderr"], zero_ok))
    rows.append(_row("E[l(T_up)] vs P(b_h<=0)/P(b_h=0)", None, up["estimate"], up["prediction"], up["stderr"], up_ok))
    checks = [_check("renewal x=" + str(entry["x"]), entry["pass"]) for entry in result["rows"]]
    checks.append(_check("x=0 consistency", zero_ok))
    checks.append(_check("upward length identity", up_ok))
    checks.append(_check("exclusion rate", result["excluded"] < 2e-3 * params["N"]))
    return rows, checks


def run_slopes(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    h, N = params["h"], params["N"]
    deltas = [multiple * law.c0 for multiple in params["delta_multiples"]]
    moments = estimate_slope_moments(law, h, N, seed, deltas, threads, budgets.sites)
    up, down = moments["up"], moments["down"]
    lengths_se = combined_stderr(up.stderr, down.stderr)
    lengths_ok = within(up.estimate, down.estimate, lengths_se, STDERR_WIDTH)
    rows = [
        _row("E[l(T_up)]", h, up.estimate, down.estimate, lengths_se, lengths_ok),
        _row("E[l(T_down)]", h, down.estimate, None, down.stderr),
    ]
    scaled = []
    for entry in moments["excess"]:
        rows.append(_row("P(e<=delta) h/delta", entry["delta"], entry["scaled"], None, entry["scaled_stderr"]))
        scaled.append(entry["scaled"])
    spread_ok = bool(scaled) and min(scaled) > 0 and max(scaled) / min(scaled) <= params["excess_spread"]

    small = params["ratio_h"]
    base = estimate_slope_moments(law, small, N, seed, (), threads, budgets.sites)["up"]
    double = estimate_slope_moments(law, 2 * small, N, seed, (), threads, budgets.sites)["up"]
    ratio = double.estimate / base.estimate
    ratio_ok = 3.5 <= ratio <= 4.5
    rows.append(_row("E[l(T_up)](2h)/E[l(T_up)](h)", small, ratio, 4.0, None, ratio_ok))

    conditioned_h = params["conditioned_h"]
    conditioned = conditioned_law_check(
        law, conditioned_h, params["conditioned_N"], seed, threads, budgets.sites, budgets.rejections
    )
    weak, _ = race_probabilities(law, conditioned_h, params["conditioned_N"], seed, threads)
    frequency = float(weak.mean())
    c1, c1_se = conditioned_h * frequency, conditioned_h * binomial_stderr(frequency, weak.size)
    acceptance_se = combined_stderr(conditioned["acceptance_scaled_stderr"], c1_se)
    acceptance = conditioned["acceptance_scaled"]
    acceptance_ok = within(acceptance, c1, acceptance_se, STDERR_WIDTH)
    ks_ok = conditioned["ks_pvalue"] > 0.01
    rows.append(_row("acceptance rate h", conditioned_h, acceptance, c1, acceptance_se, acceptance_ok))
    rows.append(_row("KS hitting lengths", conditioned_h, conditioned["ks_statistic"], None, None, ks_ok))
    checks = [
        _check("up and down lengths agree", lengths_ok),
        _check("excess height scaling", spread_ok, str(scaled)),
        _check("h^2 length scaling", ratio_ok, repr(ratio)),
        _check("conditioned acceptance", acceptance_ok),
        _check("conditioned law", ks_ok, "p=" + repr(conditioned["ks_pvalue"])),
    ]
    return rows, checks


def run_constants(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    result = estimate_c_constants(law, params["h_grid"], params["N"], seed, params["x_grid"], threads, budgets.sites)
    rows, checks = [], []
    low, high = params["positive_range"]
    for entry in result["heights"]:
        h = entry["h"]
        product_se = combined_stderr(entry["c6_stderr"], entry["product_stderr"])
        product_ok = within(entry["c6"], entry["product"], product_se, STDERR_WIDTH)
        positive_ok = low <= entry["positive"] <= high
        rows.extend(
            [
                _row("c1(h)", h, entry["c1"], None, entry["c1_stderr"]),
                _row("c1*(h)", h, entry["c1_star"], None, entry["c1_star_stderr"]),
                _row("c6(h) vs c1 c1*", h, entry["c6"], entry["product"], product_se, product_ok),
                _row("P(b_h>0)", h, entry["positive"], 0.5, entry["positive_stderr"], positive_ok),
            ]
        )
        checks.append(_check("c6 = c1 c1* at h=" + str(h), product_ok))
        checks.append(_check("P(b_h>0) range at h=" + str(h), positive_ok, repr(entry["positive"])))
    for name, estimate in result["ladder"].items():
        rows.append(_row(name + " ladder", None, estimate.estimate, None, estimate.stderr))
    for conditioning in ("weak", "strict"):
        plateau = [entry for entry in result["spitzer"] if entry["conditioning"] == conditioning]
        for entry in plateau:
            rows.append(_row("P(G_x) sqrt(x) " + conditioning, entry["x"], entry["estimate"], None, entry["stderr"]))
        values = [entry["estimate"] for entry in plateau]
        if conditioning == "weak" and len(values) > 1:
            variation = (max(values) - min(values)) / max(values) if max(values) > 0 else math.inf
            checks.append(_check("Spitzer plateau", variation < params["spitzer_tolerance"], repr(variation)))
    return rows, checks


def run_events(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    rows, frequencies = [], []
    preset = " [" + _preset(params["events"]) + "]"
    for n in params["n_grid"]:
        result = event_frequencies(law, n, params["N"], seed, params["z"], params["events"], threads, budgets.sites)
        for entry in result["rows"]:
            rows.append(_row(entry["event"] + preset, n, entry["estimate"], None, entry["stderr"]))
        frequencies.append(next(entry["estimate"] for entry in result["rows"] if entry["event"] == "E_C"))
    checks = []
    if len(frequencies) > 1:
        checks.append(_check("E_C frequency increases with n", frequencies[-1] > frequencies[0], str(frequencies)))
    return rows, checks


def run_coupling(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    result = coupling_experiment(
        law,
        params["n"],
        params["N"],
        seed,
        params["z"],
        params["events"],
        threads,
        budgets.sites,
        params["max_environments"],
    )
    preset = " [" + _preset(params["events"]) + "]"
    rows = []
    for entry in result["rows"]:
        estimate, prediction = entry["estimate"], entry["prediction"]
        rows.append(_row(entry["quantity"] + preset, result["n"], estimate, prediction, entry["stderr"], entry["pass"]))
    rows.append(_row("accepted environments", result["n"], result["accepted"]))
    rows.append(_row("skipped environments", result["n"], result["skipped"]))
    rows.append(_row("excluded environments", result["n"], result["excluded"]))
    checks = [_check(entry["quantity"], entry["pass"]) for entry in result["rows"] if entry["pass"] is not None]
    checks.append(_check("enough E_C environments", result["accepted"] == params["N"], str(result["accepted"])))
    return rows, checks


def run_sinai_llt(law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets):
    rows, checks, distances = [], [], []
    preset = " [" + _preset(params["events"]) + "]"
    for n in params["proxy_n_grid"]:
        grid = sorted(set(params["z_grid"]) | {0})
        result = verify_sinai_llt(
            law, n, grid, params["proxy_N"], seed, LltMethod.PROXY, params["events"], threads, budgets.sites
        )
        for entry in result["rows"]:
            label = "proxy P(S_n=z) n=" + str(n) + preset
            rows.append(_row(label, entry["z"], entry["estimate"], entry["prediction"], entry["stderr"]))
        origin = same_parity(0, n)
        central = next(entry for entry in result["rows"] if entry["z"] == origin)
        rows.append(_row("scaled central value", n, central["scaled"], 0.5, None))
        distances.append(abs(central["scaled"] - 0.5))
    if len(distances) > 1:
        checks.append(_check("central value approaches 1/2", distances[-1] < distances[0], str(distances)))

    dp_n, dp_N = params["dp_n"], params["dp_N"]
    exact = verify_sinai_llt(law, dp_n, params["dp_z_grid"], dp_N, seed, LltMethod.DP, None, threads, budgets.sites)
    direct = verify_sinai_llt(
        law, dp_n, params["dp_z_grid"], dp_N, seed, LltMethod.DIRECT, None, threads, budgets.sites
    )
    for left, right in zip(exact["rows"], direct["rows"]):
        stderr = combined_stderr(left["stderr"], right["stderr"])
        agree = within(left["estimate"], right["estimate"], stderr, STDERR_WIDTH)
        rows.append(_row("dp vs direct n=" + str(dp_n), left["z"], left["estimate"], right["estimate"], stderr, agree))
        checks.append(_check("dp vs direct z=" + str(left["z"]), agree))
    checks.append(_check("direct mass in parity class", direct["mass"] == 1.0, repr(direct["mass"])))
    return rows, checks


SUITES = {
    Suites.DENSITY: run_density,
    Suites.BH_LLT: run_bh_llt,
    Suites.RENEWAL: run_renewal,
    Suites.SLOPES: run_slopes,
    Suites.CONSTANTS: run_constants,
    Suites.EVENTS: run_events,
    Suites.COUPLING: run_coupling,
    Suites.SINAI_LLT: run_sinai_llt,
}


def run_suite(suite: Suites, law: EnvLaw, seed: int, params: dict, threads: int, budgets: Budgets) -> dict:
    """Run one suite and assemble its result document body."""
    suite = Suites(suite)
    _LOGGER.info("Running suite %s", suite.value)
    rows, checks = SUITES[suite](law, seed, params, threads, budgets)
    passed = all(check["pass"] for check in checks)
    _LOGGER.info("Suite %s %s", suite.value, "passed" if passed else "failed")
    return {"name": suite.value, "rows": rows, "checks": checks, "pass": passed}
