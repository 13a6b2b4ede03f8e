"""Collects one status line per acceptance criterion for the terminal summary."""
RESULTS: list[str] = []


def record(criterion: int, status: str, detail: str) -> str:
    line = f"criterion {criterion}: {status} - {detail}"
    RESULTS.append(line)
    print(line)
    return line
