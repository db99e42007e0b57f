"""Session over a loaded instance: build-once complex, concurrent degree computations."""

from __future__ import annotations

import asyncio
from collections.abc import Iterable
from typing import TYPE_CHECKING, Any

from .bredon import BredonComplex, CohomologyReport, cohomology, oracle_cohomology
from .coefficients import require_functorial
from .complexes import require_valid
from .exceptions import OracleMismatchError
from .obstruction import (
    IdentityCheck,
    ObstructionInput,
    Verdict,
    decide,
    difference_identity,
)
from .utils import ComputeConfig, get_logger

if TYPE_CHECKING:
    from .loader import Instance


class BredonSession:
    """Owns the validated Bredon complex of an instance.

    The complex is validated and assembled on first use, under a lock, and
    reused afterwards. Cohomology degrees run in worker threads, at most
    ``config.workers`` at a time; results come back in degree order whatever
    the schedule.

    Example:
        ```python
        async with BredonSession(load_instance("circle.json")) as session:
            for report in await session.cohomology(range(0, 2)):
                print(report.degree, report.describe())
        ```
    """

    def __init__(self, instance: Instance, config: ComputeConfig | None = None) -> None:
        self._instance = instance
        self._config = config or ComputeConfig()
        self._logger = get_logger("bredon_obstruction", self._config.log_level).getChild(
            "session"
        )
        self._complex: BredonComplex | None = None
        self._lock = asyncio.Lock()
        self._semaphore: asyncio.Semaphore | None = None

    @property
    def instance(self) -> Instance:
        return self._instance

    @property
    def is_ready(self) -> bool:
        """True once the complex has been validated and assembled."""
        return self._complex is not None

    async def get_complex(self) -> BredonComplex:
        """Return the validated Bredon complex, building it if needed."""
        async with self._lock:
            if self._complex is None:
                self._complex = await asyncio.to_thread(self._build)
            return self._complex

    def _build(self) -> BredonComplex:
        instance = self._instance
        require_valid(instance.complex)
        require_functorial(instance.system)
        instance.bredon.check()
        self._logger.debug("Bredon complex ready, top degree %d", instance.bredon.top)
        return instance.bredon

    async def cohomology(self, degrees: Iterable[int]) -> list[CohomologyReport]:
        """Cohomology in each requested degree, in the order given."""
        C = await self.get_complex()
        if self._semaphore is None:
            self._semaphore = asyncio.Semaphore(self._config.workers)
        semaphore = self._semaphore

        async def one(n: int) -> CohomologyReport:
            async with semaphore:
                report = await asyncio.to_thread(cohomology, C, n)
                if self._config.oracle:
                    literal = await asyncio.to_thread(oracle_cohomology, C, n)
                    if literal != report.invariants:
                        raise OracleMismatchError(
                            f"H^{n}: reduced complex gives {report.describe()}, "
                            f"compatibility families give {literal.describe()}",
                            degree=n,
                        )
                    self._logger.info("H^%d agrees with the compatibility families", n)
                self._logger.debug("H^%d computed in %.3fs", n, report.elapsed)
                return report

        return list(await asyncio.gather(*(one(n) for n in degrees)))

    async def decide(self, name: str) -> Verdict:
        """Run the decision pipeline on the named obstruction cochain."""
        C = await self.get_complex()
        alpha = self._instance.cochain(name)
        inp = ObstructionInput(C, alpha, self._instance.fibration_degrees.get(name))
        return await asyncio.to_thread(decide, inp)

    async def check_difference(self, alpha1: str, alpha2: str, d: str) -> IdentityCheck:
        C = await self.get_complex()
        instance = self._instance
        return difference_identity(
            C, instance.cochain(alpha1), instance.cochain(alpha2), instance.cochain(d)
        )

    async def close(self) -> None:
        """Drop the assembled complex."""
        self._complex = None

    async def __aenter__(self) -> BredonSession:
        return self

    async def __aexit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        await self.close()


class BredonSessionSync:
    """Synchronous wrapper for BredonSession.

    Example:
        ```python
        with BredonSessionSync(load_instance("circle.json")) as session:
            verdict = session.decide("alpha")
            print(verdict.kind.value)
        ```
    """

    def __init__(self, instance: Instance, config: ComputeConfig | None = None):
        self._session = BredonSession(instance, config)
        self._loop: asyncio.AbstractEventLoop | None = None

    def _get_loop(self) -> asyncio.AbstractEventLoop:
        """Get or create the private event loop."""
        if self._loop is None or self._loop.is_closed():
            self._loop = asyncio.new_event_loop()
        return self._loop

    def _run(self, coro: Any) -> Any:
        """Run a coroutine synchronously."""
        return self._get_loop().run_until_complete(coro)

    def close(self) -> None:
        self._run(self._session.close())
        if self._loop is not None and not self._loop.is_closed():
            self._loop.close()

    def __enter__(self) -> BredonSessionSync:
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        self.close()

    @property
    def instance(self) -> Instance:
        return self._session.instance

    def get_complex(self) -> BredonComplex:
        return self._run(self._session.get_complex())

    def cohomology(self, degrees: Iterable[int]) -> list[CohomologyReport]:
        return self._run(self._session.cohomology(degrees))

    def decide(self, name: str) -> Verdict:
        return self._run(self._session.decide(name))

    def check_difference(self, alpha1: str, alpha2: str, d: str) -> IdentityCheck:
        return self._run(self._session.check_difference(alpha1, alpha2, d))
