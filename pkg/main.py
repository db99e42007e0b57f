import asyncio
import logging
import sys
from pathlib import Path

from bredon_obstruction import (
    BredonError,
    BredonSession,
    ComputeConfig,
    VerdictKind,
    load_instance,
)

# Instance file to explore; any file in tests/instances works
INSTANCE = Path(__file__).parent / "tests" / "instances" / "antipodal_s3_sign.json"


async def main(path: Path) -> int:
    config = ComputeConfig(log_level=logging.INFO, workers=4)

    try:
        instance = load_instance(path)
    except BredonError as e:
        print(f"[!] {e.user_friendly_message}")
        return e.exit_code

    async with BredonSession(instance, config) as session:
        try:
            print(f"[...] Bredon cohomology of {path.name}")
            for report in await session.cohomology(range(instance.complex.dimension + 1)):
                print(f"      H^{report.degree} = {report.describe()}")

            for name in sorted(instance.cochains):
                verdict = await session.decide(name)
                line = f"[{name}] {verdict.kind.value}"
                if verdict.kind is VerdictKind.BLOCKED:
                    line += f" class={verdict.class_coordinates}"
                elif verdict.certificate is not None:
                    line += f" d={dict(verdict.certificate.values)}"
                elif verdict.witness is not None:
                    line += f" at {verdict.witness}"
                print(line)

        except BredonError as e:
            print(f"[!] {e.user_friendly_message}")
            return e.exit_code

    return 0


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else INSTANCE
    raise SystemExit(asyncio.run(main(target)))
