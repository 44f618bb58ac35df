import pytest

from chaosaes.analysis.corpus import corpus_images
from chaosaes.image_pipeline import REFERENCE_IV, REFERENCE_KEY, encrypt_image


@pytest.fixture(scope="session")
def corpus():
    return corpus_images()


@pytest.fixture(scope="session")
def encrypted(corpus):
    """Reference-key, fixed-IV cipher images for the whole corpus."""
    return {name: encrypt_image(img, REFERENCE_KEY, REFERENCE_IV) for name, img in corpus.items()}


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] AC{number:02d} {title}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: s.split()[1]):
            terminalreporter.write_line(line)
