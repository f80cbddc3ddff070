"""Collects one pass/fail line per acceptance criterion."""

LINES = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    LINES[n] = line
    print(line)
