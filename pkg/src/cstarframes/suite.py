"""Randomized property suite over generated frame instances.

Each case plants a frame with a known spectrum, attaches a compatible
controller (every fourth case a scalar one below the identity), and runs
the full battery of structural properties: inner product axioms, operator
norm and Gram sandwiches, integral exchange, controlled factorization,
bound optimality, contraction, scalar and star conversions, transport,
and reconstruction.

Case generation is a pure function of (seed, index); the conversion
exponent only selects which candidate bound formula is checked, so runs
with different exponents see byte-identical instances.  The "quoted"
exponent is the unsound variant kept around for adjudication: on scalar
controllers strictly below the identity it claims a lower bound above the
true spectrum, and the suite records each such counterexample.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import frames as fr
from . import integration as mi
from . import sampling as sf
from .algebra import AlgebraDescriptor, Structure, loewner_leq
from .errors import CStarFramesError
from .module import GlPlusCertificate, ModuleDescriptor, ModuleElement, ModuleOperator
from .scenario import AnalysisReport

EXPONENTS = ("derivation", "quoted")


@dataclass(frozen=True)
class CaseSpec:
    index: int
    structure: Structure
    dim: int
    rank: int
    kind: str
    size: int
    scalar_controller: Optional[float]

    def label(self) -> str:
        ctrl = f"scalar({self.scalar_controller:.3f})" if self.scalar_controller else "affine"
        return (
            f"case {self.index}: {self.structure.value} n={self.dim} k={self.rank} "
            f"{self.kind}[{self.size}] controller={ctrl}"
        )


@dataclass(frozen=True)
class PropertyFailure:
    case: int
    prop: str
    detail: str
    label: str


@dataclass(frozen=True)
class ConversionCounterexample:
    case: int
    label: str
    controller_inv_sqrt_norm: float
    claimed_lower: float
    true_lower: float
    violation: float


@dataclass(eq=False)
class SuiteReport:
    seed: int
    cases: int
    conversion_exponent: str
    caps: dict
    properties: dict[str, list[int]] = field(default_factory=dict)  # name -> [pass, fail]
    failures: list[PropertyFailure] = field(default_factory=list)
    counterexamples: list[ConversionCounterexample] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def failed(self) -> bool:
        return any(f for _, f in self.properties.values())

    def data(self) -> dict:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "conversion_exponent": self.conversion_exponent,
            "caps": self.caps,
            "properties": {k: {"pass": p, "fail": f} for k, (p, f) in self.properties.items()},
            "failures": [
                {"case": f.case, "property": f.prop, "instance": f.label, "detail": f.detail}
                for f in self.failures
            ],
            "counterexamples": [
                {
                    "case": c.case,
                    "instance": c.label,
                    "controller_inv_sqrt_norm": c.controller_inv_sqrt_norm,
                    "claimed_lower": c.claimed_lower,
                    "true_lower": c.true_lower,
                    "violation": c.violation,
                }
                for c in self.counterexamples
            ],
            "all_pass": not self.failed,
        }

    def to_report(self) -> AnalysisReport:
        return AnalysisReport(data=self.data(), failed=self.failed, wall_time_s=self.wall_time_s)


@dataclass(eq=False)
class _Case:
    spec: CaseSpec
    module: ModuleDescriptor
    space: mi.MeasureSpace
    family: fr.FrameFamily
    planted: np.ndarray
    controller: GlPlusCertificate
    transport: ModuleOperator
    rng: np.random.Generator  # post-generation stream, free for property sampling

    # assembled once, shared by the properties
    s_plain: ModuleOperator = None  # type: ignore[assignment]
    s_c: ModuleOperator = None  # type: ignore[assignment]
    bounds: fr.ScalarBounds = None  # type: ignore[assignment]


def _draw_case(seed: int, index: int, max_dim: int, max_rank: int, max_nodes: int) -> _Case:
    rng = np.random.default_rng([seed, index])
    structure = Structure.DIAGONAL if index % 2 == 0 else Structure.FULL
    n = int(rng.integers(1, max_dim + 1))
    k = int(rng.integers(1, max_rank + 1))
    module = ModuleDescriptor(AlgebraDescriptor(n, structure), k)
    low = max(k, 2)
    high = min(max_nodes, 40) if index % 10 == 7 else min(max_nodes, max(low, 8))
    m = int(rng.integers(low, high + 1))
    kind = ("gauss_legendre", "riemann", "trapezoid", "counting")[index % 4]
    if kind == "gauss_legendre":
        space = mi.gauss_legendre(0.0, 1.0, m)
    elif kind == "riemann":
        space = mi.riemann_midpoint(0.0, 1.0, m)
    elif kind == "trapezoid":
        space = mi.trapezoid(0.0, 1.0, m)
    else:
        space = mi.counting(m)
    lo = rng.uniform(0.2, 0.9)
    hi = lo + rng.uniform(0.3, 2.5)
    family, planted = sf.planted_frame(module, space, rng, (lo, hi))
    s_plain = fr.frame_operator(family)
    scalar = float(rng.uniform(0.3, 0.8)) if index % 4 == 3 else None
    controller = sf.commuting_controller(s_plain, rng, scalar_eig=scalar)
    transport = sf.commuting_surjective(s_plain, rng)
    spec = CaseSpec(index, structure, n, k, kind, m, scalar)
    case = _Case(spec, module, space, family, planted, controller, transport,
                 np.random.default_rng([seed, index, 1]))
    case.s_plain = s_plain
    case.s_c = fr.controlled_frame_operator(family, controller)
    case.bounds = fr.optimal_scalar_bounds(case.s_c)
    return case


# ---------------------------------------------------------------------------
# properties: each returns None on success or a failure detail string


def _prop_inner_product_axioms(case: _Case, exponent: str) -> Optional[str]:
    rng = case.rng
    x = sf.random_module_element(case.module, rng)
    y = sf.random_module_element(case.module, rng)
    z = sf.random_module_element(case.module, rng)
    a = sf.random_algebra_element(case.module.algebra, rng)
    lhs = (x.scale(a) + y).inner(z)
    rhs = a @ x.inner(z) + y.inner(z)
    scale = max(1.0, lhs.norm, rhs.norm)
    if (lhs - rhs).norm > 1e-12 * scale:
        return f"linearity defect {(lhs - rhs).norm:.3e}"
    sym = (x.inner(y).adjoint() - y.inner(x)).norm
    if sym > 1e-12 * max(1.0, x.inner(y).norm):
        return f"conjugate symmetry defect {sym:.3e}"
    gram = x.inner(x)
    if not gram.is_positive():
        return "inner(x, x) not positive"
    if abs(gram.norm - x.norm**2) > 1e-12 * max(1.0, x.norm**2):
        return "norm identity ||<x,x>|| = ||x||^2 violated"
    if x.norm > 1e-9 and gram.norm == 0.0:
        return "nonzero element with zero inner product"
    zero = ModuleElement.zeros(case.module)
    if zero.inner(zero).norm != 0.0 or zero.norm != 0.0:
        return "zero element has nonzero inner product"
    return None


def _prop_operator_norm_bound(case: _Case, exponent: str) -> Optional[str]:
    t = sf.random_operator(case.module, case.rng)
    for _ in range(4):
        x = sf.random_module_element(case.module, case.rng)
        tx = t.apply(x)
        if not loewner_leq(tx.inner(tx), x.inner(x) * (t.norm**2)):
            return f"<Tx,Tx> exceeds ||T||^2 <x,x> (||T||={t.norm:.3e})"
    return None


def _prop_surjective_gram_sandwich(case: _Case, exponent: str) -> Optional[str]:
    t = sf.random_invertible_operator(case.module, case.rng)
    p = t.then(t.adjoint())
    ident = ModuleOperator.identity(case.module)
    c2 = t.norm**2
    c1 = 1.0 / p.inv().norm  # independent route to the lower constant
    if not (p - ident * c1).is_positive():
        return "lower Gram constant 1/||(TT*)^-1|| not a lower bound"
    if not (ident * c2 - p).is_positive():
        return "upper Gram constant ||T||^2 not an upper bound"
    eigs = p.hermitian_eigenvalues()
    if abs(c1 - eigs[0]) > 1e-9 * max(1.0, abs(eigs[0])):
        return f"inverse-norm route disagrees with spectrum: {c1} vs {eigs[0]}"
    return None


def _prop_integral_exchange(case: _Case, exponent: str) -> Optional[str]:
    rng = case.rng
    g1 = sf.random_module_element(case.module, rng)
    g2 = sf.random_module_element(case.module, rng)
    x = sf.random_module_element(case.module, rng)
    t0 = float(case.space.nodes[0])
    span = float(case.space.nodes[-1]) - t0
    total = float(np.sum(case.space.weights))

    def f(t: float) -> ModuleElement:
        # affine in t, normalized so the integral stays O(1)
        u = (t - t0) / span if span > 0 else 0.0
        return (g1 * u + g2 * (1.0 - u)) * (1.0 / total)

    integrated = mi.integrate_module_valued(f, case.space)
    lhs = x.inner(integrated)
    rhs = mi.integrate_algebra_valued(lambda t: x.inner(f(t)), case.space)
    diff = (lhs - rhs).norm
    if diff > 1e-12 * max(1.0, lhs.norm, rhs.norm):
        return f"inner product does not pass through the integral: defect {diff:.3e}"
    return None


def _prop_frame_gram_identity(case: _Case, exponent: str) -> Optional[str]:
    flat = np.zeros_like(case.s_plain.flat)
    for mu, v in zip(case.space.weights, case.family.vectors):
        flat = flat + mu * (v.row.conj().T @ v.row)
    diff = np.max(np.abs(flat - case.s_plain.flat))
    if diff > 1e-12 * max(1.0, case.s_plain.norm):
        return f"assembled operator disagrees with Gram sum by {diff:.3e}"
    return None


def _prop_planted_spectrum(case: _Case, exponent: str) -> Optional[str]:
    eigs = case.s_plain.hermitian_eigenvalues()
    if not np.allclose(eigs, case.planted, rtol=1e-9, atol=1e-11):
        return f"recovered spectrum drifted from planted (max diff {np.max(np.abs(eigs - case.planted)):.3e})"
    return None


def _prop_controlled_factorization(case: _Case, exponent: str) -> Optional[str]:
    composed = case.s_plain.then(case.controller.operator)
    diff = np.max(np.abs(composed.flat - case.s_c.flat))
    if diff > 1e-12 * max(1.0, case.s_c.norm):
        return f"S then C differs from controlled operator by {diff:.3e}"
    return None


def _prop_operator_diagnostics(case: _Case, exponent: str) -> Optional[str]:
    report = fr.is_controlled_frame(case.family, case.controller)
    if not report.is_frame:
        return "generated instance not recognized as a frame"
    assert report.bounds is not None
    if abs(report.bounds.lower - case.bounds.lower) > 1e-12 * max(1.0, case.bounds.lower):
        return "report bounds disagree with optimal bounds"
    return None


def _prop_sandwich_optimality(case: _Case, exponent: str) -> Optional[str]:
    ident = ModuleOperator.identity(case.module)
    a, b = case.bounds.lower, case.bounds.upper
    if not (case.s_c - ident * a).is_positive():
        return "optimal lower bound fails the sandwich"
    if not (ident * b - case.s_c).is_positive():
        return "optimal upper bound fails the sandwich"
    eps = fr.EXTREMALITY_EPS_FACTOR * b
    if (case.s_c - ident * (a + eps)).is_positive():
        return "lower bound is not extremal"
    if (ident * (b - eps) - case.s_c).is_positive():
        return "upper bound is not extremal"
    return None


def _prop_contraction_bound(case: _Case, exponent: str) -> Optional[str]:
    a, b = case.bounds.lower, case.bounds.upper
    ident = ModuleOperator.identity(case.module)
    measured = (ident - case.s_c / b).norm
    if measured > (b - a) / b + 1e-10:
        return f"contraction factor {measured} exceeds (B-A)/B = {(b - a) / b}"
    return None


def _prop_norm_form(case: _Case, exponent: str) -> Optional[str]:
    xs = [sf.random_module_element(case.module, case.rng) for _ in range(16)]
    if not fr.norm_form_check(case.family, case.controller, case.bounds, xs=xs):
        return "norm-form inequality failed for optimal bounds"
    eigs = case.s_c.hermitian_eigenvalues()
    if eigs[-1] - eigs[0] > 1e-6 * eigs[-1]:
        # bounds strictly inside the spectrum must be rejected
        mid_lo = eigs[0] + 0.5 * (eigs[-1] - eigs[0])
        bad = fr.ScalarBounds(float(mid_lo), float(eigs[-1]))
        if fr.norm_form_check(case.family, case.controller, bad, xs=xs):
            return "norm-form check accepted a lower bound above the spectrum floor"
    return None


def _prop_scalar_conversion(
    case: _Case, exponent: str
) -> tuple[Optional[str], Optional[ConversionCounterexample]]:
    tol = 1e-9
    ident = ModuleOperator.identity(case.module)
    plain_bounds = fr.optimal_scalar_bounds(case.s_plain)
    to_plain = fr.convert_controlled_to_plain(case.bounds, case.controller)
    if not (case.s_plain - ident * to_plain.lower).is_positive(tol) or not (
        ident * to_plain.upper - case.s_plain
    ).is_positive(tol):
        return "controlled-to-plain conversion produced invalid bounds", None
    lo, hi = fr.plain_to_controlled_values(plain_bounds, case.controller, exponent)
    ok = (case.s_c - ident * lo).is_positive(tol) and (ident * hi - case.s_c).is_positive(tol)
    if ok:
        return None, None
    true_lo = case.bounds.lower
    ce = ConversionCounterexample(
        case=case.spec.index,
        label=case.spec.label(),
        controller_inv_sqrt_norm=case.controller.inv_sqrt_norm,
        claimed_lower=lo,
        true_lower=true_lo,
        violation=max(0.0, lo - true_lo),
    )
    return (
        f"claimed lower bound {lo:.6g} exceeds the spectrum floor {true_lo:.6g}",
        ce,
    )


def _prop_star_conversion(case: _Case, exponent: str) -> Optional[str]:
    if case.module.rank != 1 or case.module.algebra.structure is not Structure.DIAGONAL:
        return None  # multiplication form needs rank-1 diagonal instances
    sb = fr.derive_tight_star_bound(case.family, case.controller)
    xs = [sf.random_module_element(case.module, case.rng) for _ in range(24)]
    if not fr.verify_star_bounds(case.family, case.controller, sb, xs=xs):
        return "derived star bound failed verification"
    stats = fr.star_bound_gap_norms(case.family, case.controller, sb, xs=xs)
    if stats.lower_gap > 1e-10 * max(1.0, stats.scale) or stats.upper_gap > 1e-10 * max(
        1.0, stats.scale
    ):
        return f"star bound not tight (gaps {stats.lower_gap:.3e}, {stats.upper_gap:.3e})"
    plain_sb = fr.convert_star_bounds(sb, case.controller, "controlled_to_plain")
    if not fr.verify_star_bounds(
        case.family, fr.identity_controller(case.module), plain_sb, xs=xs
    ):
        return "star conversion to plain bounds failed verification"
    back = fr.convert_star_bounds(plain_sb, case.controller, "plain_to_controlled")
    if not fr.verify_star_bounds(case.family, case.controller, back, xs=xs):
        return "star conversion round trip failed verification"
    return None


def _prop_transport(case: _Case, exponent: str) -> Optional[str]:
    newfam, nb = fr.transform_frame(
        case.transport, case.family, case.controller, bounds=case.bounds
    )
    s_new = fr.controlled_frame_operator(newfam, case.controller)
    expected = case.s_c.conjugate_by(case.transport)
    diff = (s_new - expected).norm
    if diff > 1e-10 * max(1.0, s_new.norm):
        return f"transported operator differs from K S_C K* by {diff:.3e}"
    ident = ModuleOperator.identity(case.module)
    if not (s_new - ident * nb.lower).is_positive() or not (
        ident * nb.upper - s_new
    ).is_positive():
        return "transported bounds fail the sandwich"
    return None


def _prop_identity_reduction(case: _Case, exponent: str) -> Optional[str]:
    ident_c = fr.identity_controller(case.module)
    reduced = fr.controlled_frame_operator(case.family, ident_c)
    if not np.array_equal(reduced.flat, case.s_plain.flat):
        return "identity controller changed the operator"
    plain_bounds = fr.optimal_scalar_bounds(case.s_plain)
    converted = fr.convert_plain_to_controlled(plain_bounds, ident_c)
    if converted.lower != plain_bounds.lower or converted.upper != plain_bounds.upper:
        return "identity controller changed converted bounds"
    return None


def _prop_reconstruction(case: _Case, exponent: str) -> Optional[str]:
    x = sf.random_module_element(case.module, case.rng)
    tol = 1e-10
    estimate = fr.reconstruct(case.family, case.controller, x, tol)
    err = (estimate - x).norm
    if err > 10 * tol * max(x.norm, 1e-30):
        return f"reconstruction error {err:.3e} above {10 * tol:.1e} * ||x||"
    return None


_SIMPLE_PROPERTIES: list[tuple[str, Callable[[_Case, str], Optional[str]]]] = [
    ("inner_product_axioms", _prop_inner_product_axioms),
    ("operator_norm_bound", _prop_operator_norm_bound),
    ("surjective_gram_sandwich", _prop_surjective_gram_sandwich),
    ("integral_exchange", _prop_integral_exchange),
    ("frame_gram_identity", _prop_frame_gram_identity),
    ("planted_spectrum", _prop_planted_spectrum),
    ("controlled_factorization", _prop_controlled_factorization),
    ("operator_diagnostics", _prop_operator_diagnostics),
    ("sandwich_optimality", _prop_sandwich_optimality),
    ("contraction_bound", _prop_contraction_bound),
    ("norm_form", _prop_norm_form),
    ("star_conversion", _prop_star_conversion),
    ("transport", _prop_transport),
    ("identity_reduction", _prop_identity_reduction),
    ("reconstruction", _prop_reconstruction),
]


def run_property_suite(
    seed: int = 0,
    cases: int = 200,
    max_dim: int = 4,
    max_rank: int = 3,
    max_nodes: int = 64,
    conversion_exponent: str = "derivation",
) -> SuiteReport:
    if cases < 1:
        raise ValueError(f"cases must be at least 1, got {cases}")
    if conversion_exponent not in EXPONENTS:
        raise ValueError(
            f"conversion_exponent must be one of {EXPONENTS}, got {conversion_exponent!r}"
        )
    if max_dim < 1 or max_rank < 1 or max_nodes < max(2, max_rank):
        raise ValueError("caps must allow at least one valid instance")
    t0 = time.perf_counter()
    report = SuiteReport(
        seed=seed,
        cases=cases,
        conversion_exponent=conversion_exponent,
        caps={"max_dim": max_dim, "max_rank": max_rank, "max_nodes": max_nodes},
    )
    names = [name for name, _ in _SIMPLE_PROPERTIES] + ["scalar_conversion"]
    for name in names:
        report.properties[name] = [0, 0]

    def record(name: str, case: _Case, detail: Optional[str]) -> None:
        if detail is None:
            report.properties[name][0] += 1
        else:
            report.properties[name][1] += 1
            report.failures.append(
                PropertyFailure(case.spec.index, name, detail, case.spec.label())
            )

    for i in range(cases):
        case = _draw_case(seed, i, max_dim, max_rank, max_nodes)
        for name, prop in _SIMPLE_PROPERTIES:
            try:
                detail = prop(case, conversion_exponent)
            except (CStarFramesError, np.linalg.LinAlgError) as e:
                detail = f"raised {type(e).__name__}: {e}"
            record(name, case, detail)
        try:
            detail, ce = _prop_scalar_conversion(case, conversion_exponent)
        except (CStarFramesError, np.linalg.LinAlgError) as e:
            detail, ce = f"raised {type(e).__name__}: {e}", None
        record("scalar_conversion", case, detail)
        if ce is not None:
            report.counterexamples.append(ce)
    report.wall_time_s = time.perf_counter() - t0
    return report
