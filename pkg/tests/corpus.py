"""Seeded fan-file generators: random valid 2D fans and a malformed-input corpus."""

from __future__ import annotations

import math
import random

from qtoric import example_path

SHIPPED = ("quasisphere", "wps", "hirzebruch", "kite")
A_PARAM = "param a transcendental anchor 771/500 193/125"
A_VALUE = 1.543

_NOISE = (
    "(", ")", ",", "/", "^", "*", "+", "-", "a", "beta", "0", "1", "1/0", "0.5", "{", "}", "#",
    "\n", " ", "\t", "ray", "cone", "param", "hint", "quasilattice", "v1", "v9", "sigma",
    "anchor", "algebraic", "transcendental", "minpoly", "(0, 0)", "(1, 2, 3)", "é", "@", "^^",
    "a^-1", "(a-a)", "2^100", "((", "))",
)


def shipped_text(name: str) -> str:
    with open(example_path(name), encoding="utf-8") as fh:
        return fh.read()


def _mutate(rng: random.Random, text: str) -> str:
    lines = text.split("\n")
    op = rng.randrange(8)
    if op == 0 and text:
        i = rng.randrange(len(text))
        return text[:i] + text[i + rng.randint(1, 6):]
    if op == 1:
        i = rng.randrange(len(text) + 1)
        return text[:i] + rng.choice(_NOISE) + text[i:]
    if op == 2 and len(lines) > 1:
        i = rng.randrange(len(lines))
        return "\n".join(lines[:i] + [lines[i]] + lines[i:])
    if op == 3 and len(lines) > 1:
        i, j = rng.randrange(len(lines)), rng.randrange(len(lines))
        lines[i], lines[j] = lines[j], lines[i]
        return "\n".join(lines)
    if op == 4:
        return text[: rng.randrange(len(text) + 1)]
    if op == 5:
        digits = [k for k, ch in enumerate(text) if ch.isdigit()]
        if digits:
            k = rng.choice(digits)
            return text[:k] + rng.choice("0123456789") + text[k + 1:]
    if op == 6 and len(lines) > 1:
        del lines[rng.randrange(len(lines))]
        return "\n".join(lines)
    words = text.split(" ")
    i = rng.randrange(len(words))
    words[i] = rng.choice(_NOISE)
    return " ".join(words)


def fuzz_corpus(n: int = 1000, seed: int = 20240611) -> list[str]:
    rng = random.Random(seed)
    bases = [shipped_text(name) for name in SHIPPED]
    out = []
    for _ in range(n):
        text = rng.choice(bases)
        for _ in range(rng.randint(1, 3)):
            text = _mutate(rng, text)
        out.append(text)
    return out


def random_fan_text(rng: random.Random) -> str:
    """A valid two-dimensional fan file: rays sorted by angle, consecutive cones."""
    parametric = rng.random() < 0.4
    while True:
        k = rng.randint(2, 6)
        rays = []
        for _ in range(k):
            p, q = rng.randint(-4, 4), rng.randint(-4, 4)
            s = rng.randint(-2, 2) if parametric else 0
            if (p, q) == (0, 0):
                continue
            x, y = (f"{p} + {s}*a" if s else str(p)), str(q)
            rays.append(((p + s * A_VALUE, q), (x, y)))
        angles = sorted((math.atan2(v[1], v[0]), txt) for v, txt in rays)
        ok = len(angles) >= 2 and all(
            1e-3 < b[0] - a[0] < math.pi - 1e-3 for a, b in zip(angles, angles[1:])
        )
        if not ok:
            continue
        spread = angles[-1][0] - angles[0][0]
        can_close = 1e-3 < 2 * math.pi - spread < math.pi - 1e-3
        convex_open = spread < math.pi - 1e-3
        if not (can_close or convex_open):
            continue
        complete = can_close and (not convex_open or rng.random() < 0.7)
        break
    lines = [A_PARAM] if parametric else []
    for i, (_, (x, y)) in enumerate(angles):
        lines.append(f"ray r{i} ({x}, {y})")
    m = len(angles)
    for i in range(m - 1):
        lines.append(f"cone c{i} r{i} r{i + 1}")
    if complete:
        lines.append(f"cone c{m - 1} r{m - 1} r0")
    return "\n".join(lines) + "\n"
