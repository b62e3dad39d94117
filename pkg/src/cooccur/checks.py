"""Executable property checks over user and random models."""

from __future__ import annotations

import itertools
import json
import math
import random
from collections.abc import Callable
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import pandas as pd
from loguru import logger

from .codec import (
    density_from_dict,
    density_to_dict,
    dumps,
    kernel_from_dict,
    kernel_to_dict,
    measure_from_dict,
    measure_to_dict,
    piecewise_from_dict,
    piecewise_to_dict,
    variable_from_dict,
    variable_to_dict,
)
from .conditioning import (
    CiSide,
    CiSpec,
    bayes_shift,
    check_cond_independence,
    cond_kernel,
    cond_prob_pointwise,
    conditional_equality,
    constant_kernel,
    disintegrate_check,
    kernel_compose,
    kernel_fix_target,
    kernel_integrate,
    kernel_product,
    kernel_satisfies_defining_equation,
    pattern1,
    pattern2,
    pattern3,
    pattern4,
    pattern5,
    pattern6,
    satisfies_defining_equation,
    scale_rows,
)
from .constants import CHECK_NAMES, EXHAUSTIVE_EVENT_SIZE
from .cooccurrence import (
    Constraint,
    CoocQuery,
    bundle_constraints,
    cond_cooc_measure,
    cond_prob_cooc,
    cond_prob_objects,
    cooc_measure,
    prob_cooc_objects,
)
from .density import (
    BaseFamily,
    Density,
    change_of_base,
    density_wrt_base,
    density_wrt_marginals,
    kernel_from_density,
    marginal_density,
)
from .eintegral import (
    RandomVariable,
    StabilizingSequence,
    cond_expectation_event,
    cond_expectation_object,
    e_integral,
    expectation_satisfies_defining_equation,
    holder_check,
    iterated_decompose,
    jensen_check,
    minkowski_check,
)
from .exceptions import CooccurError, InvalidMeasure, NotAbsolutelyContinuous
from .models import CheckConfig
from .random_models import (
    coarser_partition,
    product_model,
    random_acyclic_scm,
    random_constraint,
    random_convex,
    random_event,
    random_exponent,
    random_finite_measure,
    random_measurable_event,
    random_model,
    random_partition,
    random_space,
    random_variable,
)
from .scm import (
    as_engine_model,
    brute_force_observational,
    intervene,
    observational_distribution,
    solve,
)
from .space import (
    EngineModel,
    Event,
    IndexSet,
    Partition,
    RandomObject,
    RationalMeasure,
    bundle,
    coarsen,
    common_refinement,
    compose,
    projection,
    pushforward,
    refines,
)

INF = math.inf


@dataclass(frozen=True)
class CaseResult:
    """Outcome of one check on one model."""

    passed: bool
    message: str = ""
    skipped: bool = False


class SkipCase(Exception):
    """Raised when a model lacks what a check needs."""

    pass


Check = Callable[[EngineModel, random.Random, CheckConfig], CaseResult]

REGISTRY: dict[str, Check] = {}


def register(name: str) -> Callable[[Check], Check]:
    def decorator(fn: Check) -> Check:
        if name not in CHECK_NAMES:
            raise ValueError(f"Unregistered check name {name!r}")
        REGISTRY[name] = fn
        return fn

    return decorator


def _ok() -> CaseResult:
    return CaseResult(True)


def _expect(condition: bool, message: str) -> CaseResult:
    return CaseResult(True) if condition else CaseResult(False, message)


def _all(*results: CaseResult) -> CaseResult:
    for result in results:
        if not result.passed:
            return result
    return _ok()


def _pick(model: EngineModel, rng: random.Random, n: int) -> list[RandomObject]:
    """n objects of the model, drawn with replacement."""
    keys = sorted(model.objects)
    if not keys:
        raise SkipCase("model has no random objects")
    return [model.objects[rng.choice(keys)] for _ in range(n)]


def _discrete(X: RandomObject) -> RandomObject:
    return coarsen(X, X.codomain.discrete)


def _events(rng: random.Random, field: Partition, count: int = 3) -> list[Event]:
    """All field-measurable events on small spaces, a few random ones otherwise."""
    if field.space.size <= EXHAUSTIVE_EVENT_SIZE:
        events = []
        for mask in itertools.product((False, True), repeat=len(field.blocks)):
            members = frozenset().union(*(b for b, keep in zip(field.blocks, mask) if keep))
            events.append(Event(field.space, members))
        return events
    return [random_measurable_event(rng, field) for _ in range(count)]


def _superset(rng: random.Random, field: Partition, event: Event) -> Event:
    return event | random_measurable_event(rng, field)


def _rows_agree(a, b, support) -> bool:
    return all(a.rows[x] == b.rows[x] for x in support)


# core space


@register("pushforward-mass")
def check_pushforward_mass(model, rng, config):
    (X,) = _pick(model, rng, 1)
    law = pushforward(model.law, X)
    A = random_event(rng, X.codomain)
    return _all(
        _expect(law.total == 1, f"P[{X.display_name}] has total mass {law.total}"),
        _expect(law.mass(A) == model.law.mass(X.preimage(A)), "P[X](A) differs from P(X in A)"),
    )


@register("pushforward-functor")
def check_pushforward_functor(model, rng, config):
    (X,) = _pick(model, rng, 1)
    target = random_space(rng, config, "G")
    g = RandomObject(X.codomain, target, tuple(rng.randrange(target.size) for _ in X.codomain.outcomes))
    step = pushforward(pushforward(model.law, X), g)
    direct = pushforward(model.law, compose(X, g))
    return _expect(step.weights == direct.weights, "Push-forward through a composite differs from two steps")


@register("refinement-order")
def check_refinement_order(model, rng, config):
    space = model.space
    p = random_partition(rng, space)
    q = coarser_partition(rng, p)
    return _all(
        _expect(refines(p, p), "Refinement is not reflexive"),
        _expect(refines(p, q), "A partition does not refine its coarsening"),
        _expect(refines(space.discrete, p) and refines(p, space.trivial), "Discrete and trivial fields are not extremal"),
        _expect(not refines(q, p) or p.blocks == q.blocks, "Refinement is not antisymmetric"),
        _expect(common_refinement([p, q]).blocks == p.blocks, "Common refinement of p and a coarsening is not p"),
    )


@register("bundle-projection")
def check_bundle_projection(model, rng, config):
    objects = dict(enumerate(_pick(model, rng, rng.randint(2, 3)), start=1))
    B = bundle(objects)
    for i, X in objects.items():
        if compose(B, projection(B.codomain, i)).mapping != X.mapping:
            return CaseResult(False, f"Projection {i} of the bundle is not the bundled object")
    return _ok()


# cooccurrence


@register("cooc-bundle-equivalence")
def check_cooc_bundle_equivalence(model, rng, config):
    targets = [random_constraint(rng, X) for X in _pick(model, rng, rng.randint(1, 3))]
    conditions = [random_constraint(rng, X) for X in _pick(model, rng, rng.randint(1, 2))]
    P = model.law
    separate = prob_cooc_objects(CoocQuery(P, tuple(targets)))
    bundled = prob_cooc_objects(CoocQuery(P, (bundle_constraints(targets),)))
    cond_separate = cond_prob_objects(CoocQuery(P, tuple(targets), tuple(conditions)))
    cond_bundled = cond_prob_objects(
        CoocQuery(P, (bundle_constraints(targets),), (bundle_constraints(conditions),))
    )
    return _all(
        _expect(separate == bundled, f"Separate constraints give {separate}, bundled give {bundled}"),
        _expect(cond_separate == cond_bundled, "Bundling changes a conditional co-occurrence"),
    )


@register("full-constraint-absorption")
def check_full_constraint_absorption(model, rng, config):
    X, Z, W = _pick(model, rng, 3)
    P = model.law
    base = CoocQuery(P, (random_constraint(rng, X),), (random_constraint(rng, W),))
    full = Constraint.full(Z)
    value = cond_prob_objects(base)
    with_target = cond_prob_objects(replace(base, targets=(*base.targets, full)))
    with_condition = cond_prob_objects(replace(base, conditions=(*base.conditions, full)))
    return _expect(value == with_target == with_condition, "A full constraint changed a conditional probability")


@register("cooc-monotonicity")
def check_cooc_monotonicity(model, rng, config):
    X, Z = _pick(model, rng, 2)
    P = model.law
    small = random_constraint(rng, X)
    large = Constraint(X, _superset(rng, X.codomain_field, small.event))
    extra = random_constraint(rng, Z)
    return _all(
        _expect(
            prob_cooc_objects(CoocQuery(P, (small,))) <= prob_cooc_objects(CoocQuery(P, (large,))),
            "Probability decreased on a larger event",
        ),
        _expect(
            prob_cooc_objects(CoocQuery(P, (small, extra))) <= prob_cooc_objects(CoocQuery(P, (small,))),
            "Adding a constraint increased the probability",
        ),
    )


@register("constraint-additivity")
def check_constraint_additivity(model, rng, config):
    X, Z, W = _pick(model, rng, 3)
    P = model.law
    blocks = list(X.codomain_field.blocks)
    rng.shuffle(blocks)
    cut = rng.randint(0, len(blocks))
    a = Event(X.codomain, frozenset().union(*blocks[:cut]))
    b = Event(X.codomain, frozenset().union(*blocks[cut:]))
    other = (random_constraint(rng, Z),)
    condition = (random_constraint(rng, W),)

    def prob(event: Event) -> Fraction:
        return prob_cooc_objects(CoocQuery(P, (Constraint(X, event), *other)))

    def cond(event: Event):
        return cond_prob_objects(CoocQuery(P, (Constraint(X, event), *other), condition))

    union = cond(a | b)
    return _all(
        _expect(prob(a | b) == prob(a) + prob(b), "Disjoint events do not add"),
        _expect(union.value == cond(a).value + cond(b).value, "Disjoint events do not add under conditioning"),
    )


# conditioning


@register("pointwise-defining-equation")
def check_pointwise_defining_equation(model, rng, config):
    X, T, C = _pick(model, rng, 3)
    targets = [random_constraint(rng, T)]
    conds = [random_constraint(rng, C)] if rng.random() < 0.5 else []
    pc = cond_prob_pointwise(model.law, X, targets, conds)
    return _expect(
        satisfies_defining_equation(pc, model.law, X, targets, conds),
        f"P[.|{X.display_name}] misses its defining equation",
    )


@register("kernel-defining-equation")
def check_kernel_defining_equation(model, rng, config):
    X1, X3, C, T = _pick(model, rng, 4)
    conds = [random_constraint(rng, C)] if rng.random() < 0.5 else []
    target_conds = [random_constraint(rng, T)] if rng.random() < 0.5 else []
    k = cond_kernel(model.law, X1, X3, conds, target_conds)
    return _expect(
        kernel_satisfies_defining_equation(k, model.law, X1, X3, conds, target_conds),
        f"Kernel P[{X3.display_name}|{X1.display_name}] misses its defining equation",
    )


@register("ae-uniqueness")
def check_ae_uniqueness(model, rng, config):
    X, T = _pick(model, rng, 2)
    targets = [random_constraint(rng, T)]
    P = model.law
    pc = cond_prob_pointwise(P, X, targets)
    null_points = [x for x in X.codomain.outcomes if x not in pc.support]
    values = list(pc.values)
    for x in null_points:
        values[x] = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    altered = pc.with_values(values)
    results = [
        _expect(altered.ae_equal(pc), "Changing null points broke a.e. equality"),
        _expect(satisfies_defining_equation(altered, P, X, targets), "Changing null points broke the equation"),
    ]
    if pc.support:
        x = min(pc.support)
        values[x] += 1
        broken = pc.with_values(values)
        results.append(_expect(not satisfies_defining_equation(broken, P, X, targets), "A changed value still fits"))
    return _all(*results)


@register("target-fixing-consistency")
def check_target_fixing_consistency(model, rng, config):
    X1, X2, X3, C = _pick(model, rng, 4)
    P = model.law
    conds = [random_constraint(rng, C)]
    a3 = random_constraint(rng, X3)
    joint = cond_kernel(P, X1, bundle({2: X2, 3: X3}), conds)
    fixed = kernel_fix_target(joint, 3, a3.event)
    direct = cond_kernel(P, X1, X2, conds, [a3])
    return _expect(fixed.ae_equal(direct), "Fixing a target coordinate differs from co-occurring with it")


@register("bayes-shift-roundtrip")
def check_bayes_shift_roundtrip(model, rng, config):
    X1, X2, X3, C = _pick(model, rng, 4)
    P = model.law
    conds = [random_constraint(rng, C)]
    a3 = random_constraint(rng, X3)
    fixed = kernel_fix_target(cond_kernel(P, X1, bundle({2: X2, 3: X3}), conds), 3, a3.event)
    p3 = cond_prob_pointwise(P, X1, [a3], conds)
    shifted = bayes_shift(fixed, p3)
    direct = cond_kernel(P, X1, X2, [*conds, a3])
    return _all(
        _expect(direct.support <= shifted.support, "Shifted kernel lost support"),
        _expect(_rows_agree(shifted, direct, direct.support), "Shifted kernel differs from the conditioned kernel"),
        _expect(
            _rows_agree(scale_rows(shifted, p3), fixed, shifted.support),
            "Scaling back does not recover the fixed kernel",
        ),
    )


@register("two-step-shift")
def check_two_step_shift(model, rng, config):
    X1, X2, X3, X4, C = _pick(model, rng, 5)
    P = model.law
    conds = [random_constraint(rng, C)]
    a3, a4 = random_constraint(rng, X3), random_constraint(rng, X4)
    joint = cond_kernel(P, X1, bundle({2: X2, 3: X3, 4: X4}), conds)
    first = bayes_shift(kernel_fix_target(joint, 4, a4.event), cond_prob_pointwise(P, X1, [a4], conds))
    second = bayes_shift(
        kernel_fix_target(first, 3, a3.event), cond_prob_pointwise(P, X1, [a3], [*conds, a4])
    )
    direct = cond_kernel(P, X1, X2, [*conds, a3, a4])
    return _all(
        _expect(direct.support <= second.support, "Two-step shift lost support"),
        _expect(_rows_agree(second, direct, direct.support), "Two-step shift differs from direct conditioning"),
    )


@register("disintegration")
def check_disintegration(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    P = model.law
    X1 = _discrete(X1)
    conds = [random_constraint(rng, C)]
    k = cond_kernel(P, X1, X2, conds)
    marginal = k.reference or RationalMeasure.zero(X1.codomain)
    rebuilt = disintegrate_check(k, marginal)
    condition = Event.full(P.space)
    for c in conds:
        condition = condition & c.pullback()
    direct = pushforward(P.restrict(condition), bundle({1: X1, 2: X2}))
    return _expect(rebuilt.weights == direct.weights, "Kernel times marginal does not rebuild the joint law")


@register("chain-rule")
def check_chain_rule(model, rng, config):
    X1, X2, X3, X4 = _pick(model, rng, 4)
    P = model.law
    X1d, X2d = _discrete(X1), _discrete(X2)
    a2, a3, a4 = random_constraint(rng, X2), random_constraint(rng, X3), random_constraint(rng, X4)
    lhs = cond_prob_pointwise(P, X1d, [a2, a3], [a4])
    k = cond_kernel(P, X1d, X2d, [a4])
    inner = cond_prob_pointwise(P, bundle({1: X1d, 2: X2d}), [a3], [a4])
    rhs = kernel_integrate(k, inner, a2.event)
    return _expect(all(lhs[x] == rhs[x] for x in lhs.support), "Chain rule fails on the support")


@register("kernel-composition")
def check_kernel_composition(model, rng, config):
    X1, X2, X3, C = _pick(model, rng, 4)
    P = model.law
    X1d, X2d, X3d = _discrete(X1), _discrete(X2), _discrete(X3)
    conds = [random_constraint(rng, C)]
    first = cond_kernel(P, X1d, X2d, conds)
    second = cond_kernel(P, bundle({1: X1d, 2: X2d}), X3d, conds)
    composed = kernel_compose(first, second, (2, 3))
    direct = cond_kernel(P, X1d, bundle({2: X2d, 3: X3d}), conds)
    return _expect(composed.ae_equal(direct), "Composed kernel differs from the joint kernel")


@register("independence-propagation")
def check_independence_propagation(model, rng, config):
    product = product_model(rng, config, count=3)
    P = product.law
    X1, X2, X3 = (product.objects[f"X{i}"] for i in (1, 2, 3))
    a1, a2 = random_constraint(rng, X1), random_constraint(rng, X2)
    joint = prob_cooc_objects(CoocQuery(P, (a1, a2)))
    p1, p2 = prob_cooc_objects(CoocQuery(P, (a1,))), prob_cooc_objects(CoocQuery(P, (a2,)))
    conditioned = cond_prob_objects(CoocQuery(P, (a1,), (a2,)))
    k = cond_kernel(P, X2, X3)
    marginal = pushforward(P, X3).weights
    return _all(
        _expect(joint == p1 * p2, "Independent co-occurrence does not factorize"),
        _expect(conditioned.null_condition or conditioned.value == p1, "Conditioning changed an independent law"),
        _expect(all(k.rows[x] == marginal for x in k.support), "Kernel rows differ from the marginal law"),
    )


def _random_ci(rng: random.Random, objects: list[RandomObject]) -> CiSpec:
    x1, x2, x3 = objects[:3]
    a = [random_constraint(rng, X) for X in objects]
    pattern = rng.randint(1, 6)
    if pattern == 1:
        return pattern1(a[0], a[1], a[2])
    if pattern == 2:
        return pattern2(a[0], x2, a[3], a[2])
    if pattern == 3:
        return pattern3(a[0], x2, a[3], x3, a[4])
    if pattern == 4:
        return pattern4(x1, a[2], a[1], a[3])
    if pattern == 5:
        return pattern5(x1, a[2], x2, a[3], a[4])
    return pattern6(x1, a[3], x2, a[4], x3, a[5])


@register("ci-equivalence")
def check_ci_equivalence(model, rng, config):
    if rng.random() < 0.5:
        model = product_model(rng, config)
        # Coarsenings of independent coordinates stay independent
        X, Y = (
            coarsen(model.objects[k], coarser_partition(rng, model.objects[k].codomain_field)) for k in ("X1", "X2")
        )
        coarse = CiSpec(CiSide(X), CiSide(Y))
        if not check_cond_independence(model.law, coarse).independent or not conditional_equality(model.law, coarse):
            return CaseResult(False, "Coarsened independent coordinates reported dependent")
    spec = _random_ci(rng, _pick(model, rng, 6))
    P = model.law
    anchor = spec.side_a.constraints[0]
    for event in _events(rng, anchor.obj.codomain_field):
        variant = replace(spec, side_a=CiSide(spec.side_a.subject, (Constraint(anchor.obj, event),)))
        independent = check_cond_independence(P, variant).independent
        if conditional_equality(P, variant) != independent:
            return CaseResult(False, f"Pattern {spec.pattern}: side A conditional disagrees with the product identity")
        if conditional_equality(P, variant, swap=True) != independent:
            return CaseResult(False, f"Pattern {spec.pattern}: side B conditional disagrees with the product identity")
    return _ok()


@register("kernel-monotonicity")
def check_kernel_monotonicity(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    P = model.law
    conds = [random_constraint(rng, C)]
    small = random_constraint(rng, X2)
    large = Constraint(X2, _superset(rng, X2.codomain_field, small.event))
    k = cond_kernel(P, X1, X2, conds)
    low = cond_prob_pointwise(P, X1, [small], conds)
    high = cond_prob_pointwise(P, X1, [large], conds)
    return _all(
        _expect(
            all(k.value(x, small.event) <= k.value(x, large.event) for x in X1.codomain.outcomes),
            "Kernel decreased on a larger event",
        ),
        _expect(all(low[x] <= high[x] for x in X1.codomain.outcomes), "Conditional decreased on a larger event"),
    )


@register("kernel-product")
def check_kernel_product(model, rng, config):
    X1, X2 = _pick(model, rng, 2)
    P = model.law
    k2 = cond_kernel(P, X1, X2)
    mu = random_finite_measure(rng, random_space(rng, config, "M"), config.max_denominator)
    kp = kernel_product(k2, constant_kernel(X1.codomain, mu))
    a2, a3 = random_event(rng, X2.codomain), random_event(rng, mu.space)
    rectangle = frozenset(kp.target.index_of((y, z)) for y in a2 for z in a3)
    rectangles = _expect(
        all(kp.value(x, rectangle) == k2.value(x, a2) * mu.mass(a3) for x in kp.support),
        "Product kernel misses rectangle values",
    )
    product = product_model(rng, config, count=3)
    Q = product.law
    Y1, Y2, Y3 = (product.objects[f"X{i}"] for i in (1, 2, 3))
    joint = cond_kernel(Q, Y1, bundle({2: Y2, 3: Y3}))
    factored = kernel_product(cond_kernel(Q, Y1, Y2), cond_kernel(Q, Y1, Y3))
    return _all(rectangles, _expect(factored.ae_equal(joint), "Independent kernels do not multiply"))


# density


def _indexed(model: EngineModel, rng: random.Random, n: int) -> dict[int, RandomObject]:
    return dict(enumerate(_pick(model, rng, n), start=1))


@register("density-roundtrip")
def check_density_roundtrip(model, rng, config):
    objects = _indexed(model, rng, rng.randint(1, 3))
    index_set = IndexSet.of(objects)
    f = density_wrt_marginals(model.law, objects, index_set)
    joint = pushforward(model.law, bundle(objects, index_set))
    return _expect(f.law().weights == joint.weights, "Density times base does not give the joint law")


@register("density-canonical")
def check_density_canonical(model, rng, config):
    objects = _indexed(model, rng, rng.randint(1, 3))
    index_set = IndexSet.of(objects)
    f = density_wrt_marginals(model.law, objects, index_set)
    counting = BaseFamily({i: RationalMeasure.counting(X.codomain) for i, X in objects.items()})
    g = density_wrt_base(model.law, objects, index_set, counting)
    joint = pushforward(model.law, bundle(objects, index_set))
    results = [_expect(g.values == joint.weights, "Density against counting measure is not the joint weights")]
    null_points = [x for x in f.space.outcomes if f.base.weights[x] == 0]
    if null_points:
        values = list(f.values)
        values[null_points[0]] = Fraction(1)
        try:
            Density(f.space, tuple(values), f.factors, f.base_kind)
            results.append(CaseResult(False, "A density nonzero on a base-null point was accepted"))
        except InvalidMeasure:
            pass
    return _all(*results)


@register("marginal-nesting")
def check_marginal_nesting(model, rng, config):
    objects = _indexed(model, rng, 3)
    full = IndexSet.of(objects)
    f = density_wrt_marginals(model.law, objects, full)
    middle = IndexSet(tuple(sorted(rng.sample(list(full), 2))))
    inner = IndexSet((rng.choice(list(middle)),))
    nested = marginal_density(marginal_density(f, middle), inner)
    direct = marginal_density(f, inner)
    fresh = density_wrt_marginals(model.law, objects, middle)
    return _all(
        _expect(nested.values == direct.values, "Marginalizing in steps differs from marginalizing at once"),
        _expect(marginal_density(f, middle).values == fresh.values, "Marginal density differs from the direct one"),
    )


@register("density-kernel")
def check_density_kernel(model, rng, config):
    objects = _indexed(model, rng, rng.randint(2, 3))
    indices = list(objects)
    rng.shuffle(indices)
    cut = rng.randint(1, len(indices) - 1)
    source = IndexSet.of(indices[:cut])
    target = IndexSet.of(indices[cut:][: rng.randint(1, len(indices) - cut)])
    f = density_wrt_marginals(model.law, objects, IndexSet.of(objects))
    from_density = kernel_from_density(f, source, target)
    direct = cond_kernel(
        model.law,
        bundle({i: _discrete(objects[i]) for i in source}, source),
        bundle(objects, target),
    )
    return _all(
        _expect(from_density.support == direct.support, "Density kernel has another support"),
        _expect(from_density.ae_equal(direct), "Density kernel differs from the conditional kernel"),
    )


def _base_family(rng: random.Random, model: EngineModel, objects: dict[int, RandomObject], config) -> BaseFamily:
    """Random base measures charging every point the marginals charge."""
    measures = {}
    for i, X in objects.items():
        marginal = pushforward(model.law, X)
        raw = random_finite_measure(rng, X.codomain, config.max_denominator)
        weights = tuple(w if w or marginal.weights[y] == 0 else Fraction(1) for y, w in enumerate(raw.weights))
        measures[i] = RationalMeasure(X.codomain, weights)
    return BaseFamily(measures)


@register("change-of-base")
def check_change_of_base(model, rng, config):
    objects = _indexed(model, rng, rng.randint(1, 3))
    index_set = IndexSet.of(objects)
    bases = _base_family(rng, model, objects, config)
    f_P = density_wrt_marginals(model.law, objects, index_set)
    marginals = {i: density_wrt_base(model.law, {i: X}, IndexSet((i,)), bases) for i, X in objects.items()}
    changed = change_of_base(f_P, marginals)
    direct = density_wrt_base(model.law, objects, index_set, bases)
    joint = pushforward(model.law, bundle(objects, index_set))
    return _all(
        _expect(changed == direct, "Change of base differs from the direct density"),
        _expect(changed.law().weights == joint.weights, "Changed density does not rebuild the joint law"),
    )


@register("absolute-continuity")
def check_absolute_continuity(model, rng, config):
    objects = _indexed(model, rng, rng.randint(1, 2))
    index_set = IndexSet.of(objects)
    bases = BaseFamily(
        {i: random_finite_measure(rng, X.codomain, config.max_denominator) for i, X in objects.items()}
    )
    X = bundle(objects, index_set)
    joint = pushforward(model.law, X)
    expected = [
        x
        for x, point in enumerate(X.codomain.points)
        if joint.weights[x] > 0 and any(bases.measure(i).weights[c] == 0 for i, c in zip(index_set, point))
    ]
    try:
        density_wrt_base(model.law, objects, index_set, bases)
    except NotAbsolutelyContinuous as e:
        witness = X.codomain.index_of(e.witness)
        return _expect(witness in expected, f"Witness {e.witness} is not a violating point")
    return _expect(not expected, "Missed a point charged by the law but not the base")


# e-integral


@register("indicator-integral")
def check_indicator_integral(model, rng, config):
    X, T, C = _pick(model, rng, 3)
    P = model.law
    a = random_constraint(rng, X)
    target, condition = random_constraint(rng, T), random_constraint(rng, C)
    indicator = RandomVariable.indicator(a.event)
    q = CoocQuery(P, (target,), (condition,))
    expectation = cond_expectation_event(indicator, q, X)
    probability = cond_prob_objects(replace(q, targets=(target, a)))
    return _all(
        _expect(e_integral(indicator, pushforward(P, X)).value == P.mass(a.pullback()), "Indicator integral differs"),
        _expect(
            e_integral(indicator, cooc_measure(CoocQuery(P, (target,)), X)).value
            == prob_cooc_objects(CoocQuery(P, (target, a))),
            "Indicator integral against a co-occurrence measure differs",
        ),
        _expect(
            expectation.value == probability.value and expectation.null_condition == probability.null_condition,
            "Conditional indicator expectation differs from the conditional probability",
        ),
    )


@register("conditioning-reduction")
def check_conditioning_reduction(model, rng, config):
    X, T, C = _pick(model, rng, 3)
    P = model.law
    Y = random_variable(rng, X.codomain, config)
    target, condition = random_constraint(rng, T), random_constraint(rng, C)
    conditional = cond_expectation_event(Y, CoocQuery(P, (target,), (condition,)), X)
    joint = e_integral(Y, cooc_measure(CoocQuery(P, (target, condition)), X)).value
    mass = prob_cooc_objects(CoocQuery(P, (condition,)))
    return _expect(conditional.value * mass == joint, "Conditional integral times condition mass differs")


@register("rectangle-integral")
def check_rectangle_integral(model, rng, config):
    X1, X2 = _pick(model, rng, 2)
    P = model.law
    a1, a2 = random_constraint(rng, X1), random_constraint(rng, X2)
    B = bundle({1: X1, 2: X2})
    rectangle = Event(B.codomain, frozenset(B.codomain.index_of((y, z)) for y in a1.event for z in a2.event))
    integral = e_integral(RandomVariable.indicator(rectangle), pushforward(P, B)).value
    return _expect(integral == prob_cooc_objects(CoocQuery(P, (a1, a2))), "Rectangle integral differs")


@register("expectation-defining-equation")
def check_expectation_defining_equation(model, rng, config):
    X1, X2, C, T = _pick(model, rng, 4)
    P = model.law
    Y = random_variable(rng, X2.codomain, config)
    conds = [random_constraint(rng, C)] if rng.random() < 0.5 else []
    target_conds = [random_constraint(rng, T)] if rng.random() < 0.5 else []
    pc = cond_expectation_object(P, Y, X1, X2, conds, target_conds)
    return _expect(
        expectation_satisfies_defining_equation(pc, P, Y, X1, X2, conds, target_conds),
        "Conditional expectation misses its defining equation",
    )


@register("iterated-decomposition")
def check_iterated_decomposition(model, rng, config):
    objects = _indexed(model, rng, rng.randint(2, 4))
    chain = list(objects)
    rng.shuffle(chain)
    constraints = {i: [random_constraint(rng, objects[i])] for i in chain if rng.random() < 0.5}
    Y = random_variable(rng, bundle(objects).codomain, config)
    result = iterated_decompose(model.law, Y, objects, chain, constraints)
    direct = e_integral(
        Y, cooc_measure(CoocQuery(model.law, tuple(c for cs in constraints.values() for c in cs)), bundle(objects))
    )
    return _expect(result.value == direct.value, "Nested integral differs from the direct one")


@register("expectation-shift")
def check_expectation_shift(model, rng, config):
    X1, X2, X3, C = _pick(model, rng, 4)
    P = model.law
    X1 = _discrete(X1)
    Y = random_variable(rng, X2.codomain, config)
    conds = [random_constraint(rng, C)]
    a3 = random_constraint(rng, X3)
    p3 = cond_prob_pointwise(P, X1, [a3], conds)
    conditioned = cond_expectation_object(P, Y, X1, X2, [*conds, a3])
    co_occurring = cond_expectation_object(P, Y, X1, X2, conds, [a3])
    divided = [co_occurring[x] / p3[x] if p3[x] > 0 else Fraction(0) for x in X1.codomain.outcomes]
    return _all(
        _expect(
            all(conditioned[x] * p3[x] == co_occurring[x] for x in co_occurring.support),
            "Shifted expectation times the conditional probability differs",
        ),
        _expect(all(divided[x] == conditioned[x] for x in conditioned.support), "Division form differs"),
    )


@register("independence-transfer")
def check_independence_transfer(model, rng, config):
    product = product_model(rng, config, count=3)
    P = product.law
    X1, X2, X3 = (product.objects[f"X{i}"] for i in (1, 2, 3))
    a2, a3 = random_constraint(rng, X2), random_constraint(rng, X3)
    k = cond_kernel(P, X1, X2, [a3])
    marginal = pushforward(P, X2).weights
    pc = cond_prob_pointwise(P, X1, [a2], [a3])
    p2 = prob_cooc_objects(CoocQuery(P, (a2,)))
    ci = check_cond_independence(P, CiSpec(CiSide(X2), CiSide(X3), X1))
    return _all(
        _expect(all(k.rows[x] == marginal for x in k.support), "Conditioning on an independent object changed the kernel"),
        _expect(all(pc[x] == p2 for x in pc.support), "Independent conditions did not drop"),
        _expect(ci.independent, "Independent coordinates failed the product identity"),
    )


@register("linearity")
def check_linearity(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    P = model.law
    Y, Z = random_variable(rng, X2.codomain, config), random_variable(rng, X2.codomain, config)
    a, b = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(1, 3), rng.randint(1, 3))
    conds = [random_constraint(rng, C)]
    q = CoocQuery(P, (), tuple(conds))
    combined = cond_expectation_event(a * Y + b * Z, q, X2).value
    separate = a * cond_expectation_event(Y, q, X2).value + b * cond_expectation_event(Z, q, X2).value
    ey = cond_expectation_object(P, Y, X1, X2, conds)
    ez = cond_expectation_object(P, Z, X1, X2, conds)
    ecombined = cond_expectation_object(P, a * Y + b * Z, X1, X2, conds)
    bigger = Y + random_variable(rng, X2.codomain, config, nonnegative=True)
    ebigger = cond_expectation_object(P, bigger, X1, X2, conds)
    eabs = cond_expectation_object(P, abs(Y), X1, X2, conds)
    return _all(
        _expect(combined == separate, "Event-conditioned expectation is not linear"),
        _expect(all(ecombined[x] == a * ey[x] + b * ez[x] for x in ey.support), "Conditional expectation is not linear"),
        _expect(all(ey[x] <= ebigger[x] for x in ey.support), "Conditional expectation is not monotone"),
        _expect(all(abs(ey[x]) <= eabs[x] for x in ey.support), "Absolute value bound fails"),
    )


@register("tower")
def check_tower(model, rng, config):
    X, C = _pick(model, rng, 2)
    P = model.law
    fine = random_partition(rng, X.codomain)
    coarse = coarser_partition(rng, fine)
    conds = [random_constraint(rng, C)] if rng.random() < 0.5 else []
    Y = random_variable(rng, X.codomain, config)
    inner = cond_expectation_object(P, Y, coarsen(X, fine), X, conds)
    outer = cond_expectation_object(P, RandomVariable(X.codomain, inner.values), coarsen(X, coarse), X, conds)
    direct = cond_expectation_object(P, Y, coarsen(X, coarse), X, conds)
    return _expect(all(outer[x] == direct[x] for x in direct.support), "Tower property fails")


def _conditional_terms(P, terms, X1, X2, conds):
    return [cond_expectation_object(P, term, X1, X2, conds) for term in terms]


@register("monotone-convergence")
def check_monotone_convergence(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    P = model.law
    conds = [random_constraint(rng, C)]
    Y = random_variable(rng, X2.codomain, config, nonnegative=True)
    seq = StabilizingSequence.truncations(Y, rng.randint(1, config.sequence_length))
    expectations = _conditional_terms(P, seq.terms(), X1, X2, conds)
    limit = cond_expectation_object(P, Y, X1, X2, conds)
    support = limit.support
    return _all(
        _expect(seq.is_increasing(), "Truncations are not increasing"),
        _expect(
            all(a[x] <= b[x] for a, b in itertools.pairwise(expectations) for x in support),
            "Expectations of an increasing sequence decreased",
        ),
        _expect(
            all(expectations[seq.stabilization_index][x] == limit[x] for x in support),
            "Expectations do not reach the limit at stabilization",
        ),
    )


def _random_sequence(rng, space, config, nonnegative=True) -> StabilizingSequence:
    length = rng.randint(0, config.sequence_length)
    prefix = tuple(random_variable(rng, space, config, nonnegative) for _ in range(length))
    return StabilizingSequence(prefix, random_variable(rng, space, config, nonnegative))


@register("fatou")
def check_fatou(model, rng, config):
    X1, X2 = _pick(model, rng, 2)
    P = model.law
    seq = _random_sequence(rng, X2.codomain, config)
    expectations = _conditional_terms(P, seq.terms(), X1, X2, [])
    support = expectations[-1].support
    for n in range(len(expectations)):
        low = cond_expectation_object(P, seq.tail_inf(n), X1, X2)
        high = cond_expectation_object(P, seq.tail_sup(n), X1, X2)
        for x in support:
            tail = [e[x] for e in expectations[n:]]
            if low[x] > min(tail):
                return CaseResult(False, f"Fatou lower bound fails at n={n}")
            if high[x] < max(tail):
                return CaseResult(False, f"Fatou upper bound fails at n={n}")
    return _ok()


@register("dominated-convergence")
def check_dominated_convergence(model, rng, config):
    X1, X2 = _pick(model, rng, 2)
    P = model.law
    seq = _random_sequence(rng, X2.codomain, config, nonnegative=False)
    bound = abs(seq.limit)
    for term in seq.prefix:
        bound = bound.maximum(abs(term))
    bound = bound + random_variable(rng, X2.codomain, config, nonnegative=True)
    law = pushforward(P, X2)
    n = seq.stabilization_index
    gap = e_integral(abs(seq.term(n) - seq.limit), law).value
    at_limit = cond_expectation_object(P, seq.term(n), X1, X2)
    limit = cond_expectation_object(P, seq.limit, X1, X2)
    return _all(
        _expect(all(abs(t).dominated_by(bound) for t in seq.terms()), "Sequence escapes its bound"),
        _expect(gap == 0, "Integral of |Y_n - Y| does not vanish at stabilization"),
        _expect(all(at_limit[x] == limit[x] for x in limit.support), "Expectations do not converge"),
    )


@register("pull-out")
def check_pull_out(model, rng, config):
    X1, X2 = _pick(model, rng, 2)
    P = model.law
    g = random_partition(rng, X1.codomain)
    X1g = coarsen(X1, g)
    block_values = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in g.blocks]
    Z = RandomVariable(X1.codomain, tuple(block_values[g.block_index[x]] for x in X1.codomain.outcomes))
    W = bundle({1: X1, 2: X2})
    Y = random_variable(rng, W.codomain, config)
    ZW = Z.compose(projection(W.codomain, 1)) * Y
    pulled = cond_expectation_object(P, ZW, X1g, W)
    plain = cond_expectation_object(P, Y, X1g, W)
    return _expect(all(pulled[x] == Z[x] * plain[x] for x in plain.support), "Measurable factor does not pull out")


def _measures(model: EngineModel, rng: random.Random, X1: RandomObject, X2: RandomObject, C: RandomObject):
    """Event-conditioned and kernel-row measures on X2's codomain."""
    P = model.law
    conditional = cond_cooc_measure(CoocQuery(P, (), (random_constraint(rng, C),)), X2)
    found = [] if conditional.null_condition else [conditional.measure]
    k = cond_kernel(P, X1, X2)
    found += [k.row(x) for x in sorted(k.support)]
    return found


@register("holder")
def check_holder(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    space = X2.codomain
    Y, Z = random_variable(rng, space, config), random_variable(rng, space, config)
    p = random_exponent(rng)
    pairs = [(1, INF), (INF, 1), (2, 2), (p, p / (p - 1))]
    for m in _measures(model, rng, X1, X2, C):
        for a, b in pairs:
            if not holder_check(Y, Z, m, a, b):
                return CaseResult(False, f"Holder fails for exponents {a}, {b}")
    return _ok()


@register("minkowski")
def check_minkowski(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    space = X2.codomain
    Y, Z = random_variable(rng, space, config), random_variable(rng, space, config)
    for m in _measures(model, rng, X1, X2, C):
        for p in (1, 2, INF, random_exponent(rng)):
            if not minkowski_check(Y, Z, m, p):
                return CaseResult(False, f"Minkowski fails for p = {p}")
    return _ok()


@register("jensen")
def check_jensen(model, rng, config):
    X1, X2, C = _pick(model, rng, 3)
    Y = random_variable(rng, X2.codomain, config)
    phi = random_convex(rng, config)
    for m in _measures(model, rng, X1, X2, C):
        if m.total == 1 and not jensen_check(phi, Y, m):
            return CaseResult(False, "Jensen fails")
    return _ok()


@register("null-convention")
def check_null_convention(model, rng, config):
    X1, X2, X3 = _pick(model, rng, 3)
    P = model.law
    nulls = [Constraint(X1, Event.empty(X1.codomain))]
    zero_points = frozenset(x for x in P.space.outcomes if P.weights[x] == 0)
    if zero_points:
        nulls.append(Constraint(RandomObject.identity(P.space), Event(P.space, zero_points)))
    target = random_constraint(rng, X2)
    Y = random_variable(rng, X2.codomain, config)
    for null in nulls:
        q = CoocQuery(P, (target,), (null,))
        value = cond_prob_objects(q)
        raw = cond_prob_cooc(P, [target.pullback()], [null.pullback()])
        measure = cond_cooc_measure(q, X3)
        pc = cond_prob_pointwise(P, X1, [target], [null])
        k = cond_kernel(P, X1, X2, [null])
        e_event = cond_expectation_event(Y, q, X2)
        e_object = cond_expectation_object(P, Y, X1, X2, [null])
        ci = check_cond_independence(P, pattern1(null, target, random_constraint(rng, X3)))
        pair = {1: X1, 2: X2}
        one = RandomVariable.constant(bundle(pair).codomain, 1)
        decomposed = iterated_decompose(P, one, pair, [1, 2], {1: [null]})
        flags = [
            value.null_condition and value.value == 0,
            raw.null_condition and raw.value == 0,
            measure.null_condition and measure.measure.total == 0,
            pc.null_condition and not any(pc.values),
            k.null_condition and not any(any(row) for row in k.rows),
            e_event.null_condition and e_event.value == 0,
            e_object.null_condition and not any(e_object.values),
            ci.independent and ci.null_condition,
            decomposed.null_condition and decomposed.value == 0,
        ]
        if not all(flags):
            return CaseResult(False, f"Null convention broken in operation {flags.index(False)}")
    return _ok()


# scm


@register("scm-observational")
def check_scm_observational(model, rng, config):
    m = random_acyclic_scm(rng, config)
    observed = observational_distribution(m)
    fixed_points = all(m.output(x, e) == m.endo_space.point(x) for e, found in solve(m).items() for x in found)
    engine = as_engine_model(m)
    i = rng.choice(list(m.endo_indices))
    position = m.endo_indices.position(i)
    v = rng.randrange(m.endo_spaces[position].size)
    queried = prob_cooc_objects(CoocQuery(engine.law, (Constraint.of(engine.objects[str(i)], [v]),)))
    expected = sum(
        (w for x, w in enumerate(observed.weights) if m.endo_space.point(x)[position] == v), Fraction(0)
    )
    return _all(
        _expect(observed.total == 1, "Observational law does not have mass one"),
        _expect(observed == brute_force_observational(m), "Observational law differs from brute force"),
        _expect(fixed_points, "A listed solution is not a fixed point"),
        _expect(queried == expected, "Engine query differs from the observational marginal"),
    )


@register("scm-acyclic-unique")
def check_scm_acyclic_unique(model, rng, config):
    m = random_acyclic_scm(rng, config)
    counts = [len(found) for _, found in solve(m).items()]
    return _expect(all(c == 1 for c in counts), f"Acyclic model has solution counts {counts}")


@register("scm-intervention-idempotent")
def check_scm_intervention_idempotent(model, rng, config):
    m = random_acyclic_scm(rng, config)
    i = rng.choice(list(m.endo_indices))
    position = m.endo_indices.position(i)
    v = rng.randrange(m.endo_spaces[position].size)
    once = intervene(m, i, v)
    twice = intervene(once, i, v)
    observed = observational_distribution(once)
    forced = all(m_x == 0 or once.endo_space.point(x)[position] == v for x, m_x in enumerate(observed.weights))
    return _all(
        _expect(once.mechanism == twice.mechanism, "Intervening twice differs from once"),
        _expect(forced, "Intervened coordinate is not deterministic"),
    )


# serialization


@register("serialization-roundtrip")
def check_serialization_roundtrip(model, rng, config):
    X1, X2 = _pick(model, rng, 2)
    P = model.law
    spaces = {s.display_name: s for s in (P.space, X1.codomain, X2.codomain)}
    law = pushforward(P, X1)
    k = cond_kernel(P, X1, X2)
    objects = {1: X1, 2: X2}
    f = density_wrt_marginals(P, objects, IndexSet.of(objects))
    Y = random_variable(rng, X2.codomain, config)
    phi = random_convex(rng, config)

    def reread(data: dict) -> dict:
        return json.loads(dumps(data))

    return _all(
        _expect(measure_from_dict(reread(measure_to_dict(law)), spaces) == law, "Measure changes through JSON"),
        _expect(kernel_from_dict(reread(kernel_to_dict(k)), spaces) == k, "Kernel changes through JSON"),
        _expect(
            density_from_dict(reread(density_to_dict(f)), f.space, f.factors) == f, "Density changes through JSON"
        ),
        _expect(variable_from_dict(reread(variable_to_dict(Y)), spaces) == Y, "Variable changes through JSON"),
        _expect(piecewise_from_dict(reread(piecewise_to_dict(phi))) == phi, "Convex function changes through JSON"),
    )


@dataclass(frozen=True)
class CheckReport:
    """Per-case records of a check run."""

    frame: pd.DataFrame

    @property
    def ok(self) -> bool:
        return not bool(self.frame["failed"].any()) if len(self.frame) else True

    def summary(self) -> pd.DataFrame:
        """Pass, fail and skip counts per check with the first failure message."""
        columns = ["passed", "failed", "skipped", "first_failure"]
        if not len(self.frame):
            return pd.DataFrame(columns=columns)
        grouped = self.frame.groupby("check", sort=False)
        summary = grouped.agg(passed=("passed", "sum"), failed=("failed", "sum"), skipped=("skipped", "sum"))
        failures = self.frame[self.frame["failed"]].groupby("check", sort=False)["message"].first()
        summary["first_failure"] = failures.reindex(summary.index).fillna("")
        return summary[columns]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": {
                name: {
                    "passed": int(row.passed),
                    "failed": int(row.failed),
                    "skipped": int(row.skipped),
                    "first_failure": row.first_failure,
                }
                for name, row in self.summary().iterrows()
            },
        }


def run_case(name: str, model: EngineModel, rng: random.Random, config: CheckConfig) -> CaseResult:
    """Run one check, turning engine errors into failures."""
    try:
        return REGISTRY[name](model, rng, config)
    except SkipCase as e:
        return CaseResult(True, str(e), skipped=True)
    except CooccurError as e:
        return CaseResult(False, f"{type(e).__name__}: {e}")
    except Exception as e:
        logger.opt(exception=e).debug("Check {} crashed", name)
        return CaseResult(False, f"{type(e).__name__}: {e}")


def run_checks(model: Optional[EngineModel], config: Optional[CheckConfig] = None) -> CheckReport:
    """
    Run the selected checks on the user model and on seeded random models.

    Args:
        model: User model, or None to run on random models only
        config: Selection, case count, seed and random-model limits

    Returns:
        Report with one record per (check, case)
    """
    config = config or CheckConfig()
    records = []
    for name in config.selected:
        cases: list[tuple[str, Optional[EngineModel]]] = []
        if model is not None:
            cases.append(("model", model))
        cases += [(str(case), None) for case in range(config.cases)]
        for label, case_model in cases:
            rng = random.Random(f"{config.seed}:{name}:{label}")
            if case_model is None:
                case_model = random_model(rng, config, coarse=True)
            result = run_case(name, case_model, rng, config)
            records.append(
                {
                    "check": name,
                    "case": label,
                    "passed": result.passed and not result.skipped,
                    "failed": not result.passed,
                    "skipped": result.skipped,
                    "message": result.message,
                }
            )
        logger.debug("Ran check {} on {} cases", name, len(cases))
    frame = pd.DataFrame(records, columns=["check", "case", "passed", "failed", "skipped", "message"])
    return CheckReport(frame)
