import logging
from abc import ABC, abstractmethod

from ..config import SuiteEntry
from ..schemas import CheckReport, SuiteOptions

logger = logging.getLogger(__name__)


class BaseCheck(ABC):
    """
    One entry of the verification suite.

    Concrete checks wrap a verify/expsolve/opaction function in ``execute``;
    ``run`` stamps the suite name, the registered expectation and the entry
    params onto the report.
    """

    def __init__(self, entry: SuiteEntry, options: SuiteOptions):
        self.entry = entry
        self.options = options

    @property
    def preset(self) -> str:
        if self.entry.preset is None:
            raise ValueError(f"suite entry '{self.entry.name}' needs a preset")
        return self.entry.preset

    def param(self, key: str, default=None):
        return self.entry.params.get(key, default)

    def run(self) -> CheckReport:
        logger.info(f"Running check {self.entry.name}")
        report = self.execute()
        parameters = {**report.parameters, **self.entry.params}
        report = report.model_copy(
            update={
                "check": self.entry.name,
                "expected": self.entry.expected,
                "parameters": parameters,
            }
        )
        logger.info(
            f"Check {self.entry.name}: {report.status.value} "
            f"(expected {report.expected.value}, {len(report.witnesses)} witnesses)"
        )
        return report

    @abstractmethod
    def execute(self) -> CheckReport:
        """Computes the report; name and expectation are filled in by ``run``."""
        pass
