from ..expr import render
from ..presets import build_preset, derivation_table, eps_contract, eps_null, epsilon_tensor
from ..qcoeff import q
from ..schemas import CheckReport, Witness
from ..verify import (
    check_automorphism,
    check_automorphism_fixed,
    check_automorphism_involution,
    check_confluence,
    check_derivation,
    check_preset_relations,
    check_realization,
    check_star_closure,
)
from .base import BaseCheck


class RelationsCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_preset_relations(self.preset, corrected=self.options.corrected)


class ConfluenceCheck(BaseCheck):
    def execute(self) -> CheckReport:
        p = build_preset(self.preset, corrected=self.options.corrected)
        report = check_confluence(p, self.options.max_degree)
        report.parameters["corrected"] = self.options.corrected
        return report


class StarClosureCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_star_closure(build_preset(self.preset))


class DerivationCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_derivation(build_preset(self.preset), derivation_table(self.preset))


class AutomorphismCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_automorphism()


class AutomorphismFixedCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_automorphism_fixed(self.preset)


class AutomorphismInvolutionCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_automorphism_involution(self.param("max_degree", 3))


class RealizationCheck(BaseCheck):
    def execute(self) -> CheckReport:
        return check_realization()


class EpsilonContractCheck(BaseCheck):
    def execute(self) -> CheckReport:
        value = eps_contract(epsilon_tensor())
        difference = value - (q(1) + q(-1))
        witnesses = []
        if difference:
            witnesses.append(Witness(input="eps^{AB} eps_{BA} - (q + q^-1)", difference=render(difference)))
        return CheckReport.from_witnesses("epsilon-contract", witnesses, examined=1)


class EpsilonNullCheck(BaseCheck):
    def execute(self) -> CheckReport:
        p = build_preset("twistor")
        value = eps_null(epsilon_tensor(), p)
        witnesses = []
        if value:
            witnesses.append(Witness(input="phi^A phi^B eps_{AB}", difference=render(value, p)))
        return CheckReport.from_witnesses("epsilon-null", witnesses, examined=1)
