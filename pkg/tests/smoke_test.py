import logging
import sys

LOGGER = logging.getLogger(__name__)


def main() -> int:
    """Run smoke tests on the installed package."""
    LOGGER.info("🧪 Starting smoke test...")

    # Test 1: Import the front ends
    LOGGER.info("✓ Testing imports...")
    try:
        from focalite.cli import main as cli_main  # noqa: PLC0415
        from focalite.service import create_app  # noqa: PLC0415
        from focalite.session import SourceFile, check_sources  # noqa: PLC0415
    except ImportError:
        LOGGER.exception("✗ Failed to import focalite")
        return 1

    # Test 2: The bundled corpus is packaged
    LOGGER.info("✓ Testing corpus...")
    try:
        from focalite.corpus import load_corpus  # noqa: PLC0415

        assert load_corpus()
    except Exception:
        LOGGER.exception("✗ Failed to load the corpus")
        return 1

    # Test 3: Check a small unit
    LOGGER.info("✓ Testing checker...")
    try:
        report = check_sources(
            [
                SourceFile(
                    name="smoke.fcl",
                    text=(
                        "species Smoke =\n"
                        "  let id(x : int) : int = x;\n"
                        "  theorem id_spec : all x : int, id(x) = x\n"
                        "    proof = by definition of id;\n"
                        "end;;\n"
                    ),
                ),
            ],
        )
        assert report.ok
    except Exception:
        LOGGER.exception("✗ Failed to check a unit")
        return 1

    # Test 4: Build the HTTP app and parse a command line
    LOGGER.info("✓ Testing front ends...")
    try:
        assert create_app() is not None
        assert cli_main(["fmt", "--help"]) == 0
    except SystemExit as exit_info:
        if exit_info.code != 0:
            LOGGER.exception("✗ Command line parser failed")
            return 1
    except Exception:
        LOGGER.exception("✗ Failed to build the front ends")
        return 1

    LOGGER.info("✅ All smoke tests passed!")
    return 0


if __name__ == "__main__":
    sys.exit(main())
