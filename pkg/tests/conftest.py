import pytest

from adsharvest import cli

VERDICTS = []


@pytest.fixture
def verdict():
    """Record a named pass/fail line, then assert it."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip()
        VERDICTS.append(line)
        print(line)
        assert ok, line

    return record


_SWEEPS = {}


@pytest.fixture(scope="session")
def sweep():
    """Run a shipped config once per session and return (header, data, flags)."""
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "configs"

    def run(name: str):
        if name not in _SWEEPS:
            spec = cli.parse_config((root / name).read_text(encoding="utf-8"))
            _SWEEPS[name] = cli.read_csv(cli.run_sweep(spec, workers=1))
        return _SWEEPS[name]

    return run


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)
