"""Regenerates the synthetic members of the desk corpus (csv, dna, binary)."""

import math
import random
from pathlib import Path

DESK = Path(__file__).with_name("desk")


def readings(rng):
    lines = ["station,day,temp_c,rain_mm"]
    for station in ["north", "quay", "ridge"]:
        base = rng.uniform(6, 12)
        for day in range(1, 61):
            temp = base + 6 * math.sin(day / 9.5) + rng.gauss(0, 1.5)
            rain = max(0.0, rng.gauss(0, 4)) if rng.random() < 0.45 else 0.0
            lines.append(f"{station},{day},{temp:.1f},{rain:.1f}")
    return "\n".join(lines) + "\n"


def mutate(seq, rng, rate):
    out = []
    for base in seq:
        r = rng.random()
        if r < rate * 0.8:
            out.append(rng.choice([b for b in "ACGT" if b != base]))
        elif r < rate * 0.9:
            continue
        elif r < rate:
            out.append(base)
            out.append(rng.choice("ACGT"))
        else:
            out.append(base)
    return "".join(out)


def fasta(name, seq):
    body = "\n".join(seq[i : i + 70] for i in range(0, len(seq), 70))
    return f">{name}\n{body}\n"


def main():
    rng = random.Random(20240611)
    (DESK / "readings.csv").write_text(readings(rng))
    ancestor = "".join(rng.choice("ACGT") for _ in range(4000))
    (DESK / "strain-a.fa").write_text(fasta("strain-a synthetic", mutate(ancestor, rng, 0.04)))
    (DESK / "strain-b.fa").write_text(fasta("strain-b synthetic", mutate(ancestor, rng, 0.04)))
    (DESK / "noise.bin").write_bytes(bytes(rng.getrandbits(8) for _ in range(3000)))


if __name__ == "__main__":
    main()
