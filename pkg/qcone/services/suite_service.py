import asyncio
import logging
from typing import List, Optional, Sequence

from ..checks import get_check
from ..config import SuiteConfig, SuiteEntry, suite_settings
from ..schemas import CheckReport, CheckStatus, SuiteOptions, Witness

logger = logging.getLogger(__name__)


class UnknownGroupError(ValueError):
    """A suite group filter names no group of the suite."""


def select_entries(options: SuiteOptions, suite: Optional[SuiteConfig] = None) -> List[SuiteEntry]:
    """Suite entries matching the group and preset filters, in suite order."""
    suite = suite or suite_settings
    entries = suite.checks
    if options.groups:
        unknown = set(options.groups) - set(suite.groups)
        if unknown:
            raise UnknownGroupError(f"Unknown groups {sorted(unknown)}. Known groups: {suite.groups}")
        entries = [e for e in entries if e.group in options.groups]
    if options.preset:
        entries = [e for e in entries if e.preset == options.preset]
    return list(entries)


def _run_entry(entry: SuiteEntry, options: SuiteOptions) -> CheckReport:
    try:
        return get_check(entry, options).run()
    except NotImplementedError:
        raise
    except Exception as e:
        # a crashing check is a failed check; the other checks still run
        logger.error(f"Error in check {entry.name}: {e}")
        return CheckReport(
            check=entry.name,
            status=CheckStatus.FAIL,
            expected=entry.expected,
            witnesses=[Witness(input="error", difference=f"{type(e).__name__}: {e}")],
        )


async def run_suite(options: SuiteOptions, suite: Optional[SuiteConfig] = None) -> List[CheckReport]:
    """
    Esegue la suite di verifica selezionata.

    Checks are independent and run concurrently in worker threads; the
    returned reports follow the suite order, not completion order.

    Args:
        options: group/preset filters, corrected-table flag and degree cap
        suite: suite definition, the packaged one by default

    Returns:
        One CheckReport per selected entry
    """
    entries = select_entries(options, suite)
    logger.info(f"Running {len(entries)} checks")
    reports = await asyncio.gather(
        *(asyncio.to_thread(_run_entry, entry, options) for entry in entries)
    )
    unexpected = [r.check for r in reports if not r.ok]
    if unexpected:
        logger.warning(f"Unexpected outcome for: {', '.join(unexpected)}")
    else:
        logger.info(f"All {len(reports)} checks have their expected outcome")
    return list(reports)


def run_all(options: Optional[SuiteOptions] = None) -> List[CheckReport]:
    """Synchronous entry point used by the command line."""
    return asyncio.run(run_suite(options or SuiteOptions()))


def suite_ok(reports: Sequence[CheckReport]) -> bool:
    """Expected-pass checks passed and every expected-fail check failed with a witness."""
    return all(r.ok for r in reports)
