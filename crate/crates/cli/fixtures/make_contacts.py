"""Writes contacts_200.txt: a synthetic face-to-face contact log.

200 people in 10 classes of 20. Every 20 seconds over a school day one to
three groups of 2-5 people meet, usually within one class. Activity is
heavy-tailed so a few people join many groups. Each line is
`timestamp id id ...`. Deterministic given the seed.
"""

import random

N, CLASSES, STEPS, SEED = 200, 10, 100, 7


def main():
    rng = random.Random(SEED)
    activity = [rng.paretovariate(1.6) for _ in range(N)]
    classes = [list(range(c * N // CLASSES, (c + 1) * N // CLASSES)) for c in range(CLASSES)]
    lines, seen = [], set()
    for step in range(STEPS):
        t = 28800 + 20 * step
        for _ in range(rng.randint(1, 3)):
            size = 2 if rng.random() < 0.6 else rng.randint(3, 5)
            pool = rng.choice(classes) if rng.random() < 0.8 else range(N)
            pool = list(pool)
            group = set()
            while len(group) < size:
                group.add(rng.choices(pool, weights=[activity[v] for v in pool])[0])
            seen |= group
            lines.append((t, sorted(group)))
    # Nobody is left out: stragglers meet a classmate at the end of the day.
    t = 28800 + 20 * STEPS
    for v in range(N):
        if v not in seen:
            mate = rng.choice([u for u in classes[v * CLASSES // N] if u != v])
            lines.append((t, sorted({v, mate})))
    with open("contacts_200.txt", "w") as f:
        f.write("# timestamp member...\n")
        for t, g in lines:
            f.write(f"{t} {' '.join(map(str, g))}\n")


if __name__ == "__main__":
    main()
