"""Semilinear sets: finite unions of linear sets of nonnegative vectors.

A linear set is a constant vector plus all nonnegative integer
combinations of its period vectors.  The text format mirrors the machine
format: a header line, one `linear` line per component, each followed by
zero or more `period` lines.
"""

from __future__ import annotations

from dataclasses import dataclass


class SemilinearFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LinearSet:
    dim: int
    constant: tuple[int, ...]
    periods: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        for vec in (self.constant, *self.periods):
            if len(vec) != self.dim:
                raise ValueError("vector arity does not match dimension")
            if any(x < 0 for x in vec):
                raise ValueError("entries must be nonnegative")


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: tuple[LinearSet, ...]

    def __post_init__(self) -> None:
        for comp in self.components:
            if comp.dim != self.dim:
                raise ValueError("component dimension mismatch")

    @staticmethod
    def empty(dim: int) -> "SemilinearSet":
        return SemilinearSet(dim, ())


def linear_member(component: LinearSet, vector: tuple[int, ...]) -> bool:
    """Exact membership by bounded search over period coefficients.

    Each period with a nonzero coordinate can be used at most
    (remaining coordinate / period coordinate) times, so the search tree
    is finite; all-zero periods contribute nothing and are skipped.
    """
    if len(vector) != component.dim:
        raise ValueError("vector arity does not match dimension")
    target = tuple(v - c for v, c in zip(vector, component.constant))
    if any(x < 0 for x in target):
        return False
    periods = [p for p in component.periods if any(p)]

    def rec(remaining: tuple[int, ...], idx: int) -> bool:
        if not any(remaining):
            return True
        if idx == len(periods):
            return False
        period = periods[idx]
        top = min(r // p for r, p in zip(remaining, period) if p)
        for times in range(top + 1):
            nxt = tuple(r - times * p for r, p in zip(remaining, period))
            if all(x >= 0 for x in nxt) and rec(nxt, idx + 1):
                return True
        return False

    return rec(target, 0)


def semilinear_member(sls: SemilinearSet, vector) -> bool:
    vector = tuple(vector)
    if len(vector) != sls.dim:
        raise ValueError("vector arity does not match dimension")
    return any(linear_member(comp, vector) for comp in sls.components)


def is_m_positive(sls: SemilinearSet, m: int) -> bool:
    """True when every period of every component has at most m nonzero
    coordinates."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return all(
        sum(1 for x in period if x) <= m
        for comp in sls.components
        for period in comp.periods
    )


# ---------------------------------------------------------------------------
# Text format


def parse_semilinear(text: str) -> SemilinearSet:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    if not lines:
        raise SemilinearFormatError("empty description")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "semilinear" or not parts[1].startswith("dim="):
        raise SemilinearFormatError(f"line {lineno}: expected 'semilinear dim=<n>'")
    try:
        dim = int(parts[1][4:])
    except ValueError:
        raise SemilinearFormatError(f"line {lineno}: bad dimension") from None

    def vector(lineno: int, items: list[str]) -> tuple[int, ...]:
        try:
            vec = tuple(int(x) for x in items)
        except ValueError:
            raise SemilinearFormatError(f"line {lineno}: entries must be integers") from None
        if len(vec) != dim:
            raise SemilinearFormatError(f"line {lineno}: expected {dim} entries")
        if any(x < 0 for x in vec):
            raise SemilinearFormatError(f"line {lineno}: entries must be nonnegative")
        return vec

    components: list[LinearSet] = []
    constant: tuple[int, ...] | None = None
    periods: list[tuple[int, ...]] = []

    def flush() -> None:
        nonlocal constant, periods
        if constant is not None:
            components.append(LinearSet(dim, constant, tuple(periods)))
        constant, periods = None, []

    for lineno, line in lines[1:]:
        head, *rest = line.split()
        if head == "linear":
            flush()
            constant = vector(lineno, rest)
        elif head == "period":
            if constant is None:
                raise SemilinearFormatError(f"line {lineno}: period before any linear")
            periods.append(vector(lineno, rest))
        else:
            raise SemilinearFormatError(f"line {lineno}: unknown directive {head!r}")
    flush()
    return SemilinearSet(dim, tuple(components))


def dump_semilinear(sls: SemilinearSet) -> str:
    out = [f"semilinear dim={sls.dim}"]
    for comp in sls.components:
        out.append("linear " + " ".join(map(str, comp.constant)))
        for period in comp.periods:
            out.append("period " + " ".join(map(str, period)))
    return "\n".join(out) + "\n"


def load_semilinear(path: str) -> SemilinearSet:
    with open(path, encoding="utf-8") as handle:
        return parse_semilinear(handle.read())


def save_semilinear(sls: SemilinearSet, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dump_semilinear(sls))
