import itertools

from ..expr import parse_element, render
from ..expsolve import (
    ExponentForm,
    InconsistentSystem,
    closure_residuals,
    generate_constraints,
    row_reduce,
    solve,
)
from ..ncalg import Element, normalize
from ..opaction import act, box_q, classical_limit, compose, derivative, operator_table, to_momenta
from ..presets import PresetName, build_preset, named_element
from ..schemas import CheckReport, Witness
from .base import BaseCheck

# independent equations expected from the realization constraints
REFERENCE_EQUATIONS = [
    ExponentForm.build(-1, {"m": 1, "n": -1}),
    ExponentForm.build(-1, {"n": 1, "k": -1}),
    ExponentForm.build(-1, {"l": 1, "k": -1}),
]

EXPECTED_POINT = {"n": 0, "m": 1, "k": -1, "l": 0}


class ExponentSystemCheck(BaseCheck):
    def execute(self) -> CheckReport:
        system = generate_constraints()
        reduced = row_reduce(system.forms())
        expected = row_reduce(REFERENCE_EQUATIONS)
        witnesses = []
        if system.has_unsatisfiable_marker:
            witnesses.append(Witness(input="generated system", difference="unsatisfiable marker present"))
        if reduced != expected:
            witnesses.append(
                Witness(
                    input="row-reduced system",
                    difference="; ".join(f"{f} = 0" for f in reduced) or "empty",
                )
            )
        return CheckReport.from_witnesses(
            "exponent-system", witnesses, examined=len(system.equations)
        )


class ExponentSolutionCheck(BaseCheck):
    def execute(self) -> CheckReport:
        with_reality = bool(self.param("with_reality", False))
        with_star_closure = bool(self.param("with_star_closure", False))
        witnesses = []
        try:
            solution = solve(
                generate_constraints(), with_reality=with_reality, with_star_closure=with_star_closure
            )
        except InconsistentSystem as exc:
            witnesses.append(Witness(input="solve", difference=str(exc)))
        else:
            if not solution.is_point or solution.point() != EXPECTED_POINT:
                witnesses.append(Witness(input="solution", difference=str(solution)))
            for residual in closure_residuals(solution):
                witnesses.append(Witness(input=f"closure {residual.provenance}", difference=str(residual)))
        return CheckReport.from_witnesses("exponent-solution", witnesses, examined=1)


class OperatorCompositionCheck(BaseCheck):
    """act(compose(a, b), f) = act(a, act(b, f)) on all coordinate monomials up to the degree cap."""

    def execute(self) -> CheckReport:
        max_degree = self.param("max_degree", 3)
        coords = build_preset(PresetName.NULLVECTOR)
        derivs = build_preset(PresetName.DERIV_ONLY)
        table = operator_table()
        monomials = [
            Element.monomial(word)
            for degree in range(max_degree + 1)
            for word in itertools.combinations_with_replacement(range(len(coords.alphabet)), degree)
        ]
        witnesses = []
        examined = 0
        for a_gen, b_gen in itertools.product(derivs.alphabet, repeat=2):
            a, b = derivative(a_gen.name), derivative(b_gen.name)
            composed = compose(a, b)
            for f in monomials:
                examined += 1
                difference = act(composed, f, table=table) - act(a, act(b, f, table=table), table=table)
                if difference:
                    witnesses.append(
                        Witness(
                            input=f"{a_gen.name} {b_gen.name} on {render(f, coords)}",
                            difference=render(difference, coords),
                        )
                    )
        return CheckReport.from_witnesses("operator-composition", witnesses, examined=examined)


class OperatorCommutativityCheck(BaseCheck):
    def execute(self) -> CheckReport:
        derivs = build_preset(PresetName.DERIV_ONLY)
        d12, d21 = derivative("D12"), derivative("D21")
        difference = compose(d12, d21) - compose(d21, d12)
        witnesses = []
        if difference:
            witnesses.append(Witness(input="D12 D21 - D21 D12", difference=render(difference, derivs)))
        return CheckReport.from_witnesses("operator-commutativity", witnesses, examined=1)


class ClassicalLimitCheck(BaseCheck):
    # h-parts of the q-D'Alembertian under q = exp(ih)
    EXPECTED = {0: "D11 D22 - D12 D21", 1: "-2 i D12 D21", 2: "2 D12 D21"}

    def execute(self) -> CheckReport:
        order = self.param("order", 1)
        derivs = build_preset(PresetName.DERIV_ONLY)
        parts = classical_limit(box_q(), order)
        witnesses = []
        for power in range(order + 1):
            expected = parse_element(self.EXPECTED[power], derivs) if power in self.EXPECTED else None
            if expected is None:
                continue
            actual = parts.get(power, Element.zero())
            if actual != expected:
                witnesses.append(
                    Witness(input=f"h^{power} part", difference=render(actual - expected, derivs))
                )
        return CheckReport.from_witnesses("classical-limit", witnesses, examined=order + 1)


class MomentumDalembertianCheck(BaseCheck):
    """Box in momenta equals minus the q-determinant of P."""

    def execute(self) -> CheckReport:
        momenta = build_preset(PresetName.MOMENTUM)
        difference = to_momenta(box_q()) + normalize(named_element("qdet-momentum"), momenta)
        witnesses = []
        if difference:
            witnesses.append(Witness(input="Box + det P", difference=render(difference, momenta)))
        return CheckReport.from_witnesses("momentum-dalembertian", witnesses, examined=1)
