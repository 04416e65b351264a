"""Regenerate src/field_table.cpp.

Units by direct search for the smallest solution of the norm equation,
class numbers by counting cycles of reduced indefinite binary forms.
Both are independent of the C++ routines that the table is checked against.
"""
from math import isqrt, gcd


def squarefree(n):
    return all(n % (p * p) for p in range(2, isqrt(n) + 1))


def unit(D):
    t, n = (1, (1 - D) // 4) if D % 4 == 1 else (0, -D)
    b = 1
    while True:
        # a^2 + t a b + n b^2 = +-1
        for s in (-1, 1):
            disc = t * t * b * b - 4 * (n * b * b - s)
            if disc >= 0:
                r = isqrt(disc)
                if r * r == disc:
                    for a in ((-t * b + r) // 2, (-t * b - r) // 2):
                        if a * a + t * a * b + n * b * b == s:
                            cands = [(a, b), (-a, -b)]
                            w1 = (t + (t * t - 4 * n) ** 0.5) / 2
                            for x, y in cands:
                                if x + y * w1 > 1:
                                    return x, y, s
        b += 1


def narrow_class_number(disc):
    r = isqrt(disc)
    forms = set()
    for b in range(1, r + 1):
        if (b * b - disc) % 4:
            continue
        ac = (b * b - disc) // 4
        for a in range(-abs(ac), abs(ac) + 1):
            if a == 0 or ac % a:
                continue
            c = ac // a
            if gcd(gcd(a, b), c) != 1:
                continue
            # reduced: 0 < b < sqrt(disc), sqrt(disc) - b < 2|a| < sqrt(disc) + b
            sd = disc ** 0.5
            if b < sd and sd - b < 2 * abs(a) < sd + b:
                forms.add((a, b, c))

    def rho(f):
        a, b, c = f
        m = 2 * abs(c)
        sd = disc ** 0.5
        bb = (-b) % m
        while bb <= sd - m:
            bb += m
        while bb > sd:
            bb -= m
        # choose representative in (sqrt(disc) - 2|c|, sqrt(disc))
        return (c, bb, (bb * bb - disc) // (4 * c))

    seen, cycles = set(), 0
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = rho(g)
    return cycles


rows = []
for D in range(2, 101):
    if not squarefree(D):
        continue
    disc = D if D % 4 == 1 else 4 * D
    a, b, s = unit(D)
    hp = narrow_class_number(disc)
    h = hp if s == -1 else hp // 2
    rows.append((D, disc, a, b, h))

out = ['// Generated by tools/gen_field_table.py; do not edit.',
       '#include "ntk/field.hpp"', '', 'namespace ntk {', '',
       'const std::vector<FieldTableRow>& field_table() {',
       '    static const std::vector<FieldTableRow> rows = {',
       '        {1, 1, 1, 0, 1},']
for D, disc, a, b, h in rows:
    out.append(f'        {{{D}, {disc}, {a}, {b}, {h}}},')
out += ['    };', '    return rows;', '}', '', '}  // namespace ntk', '']
open('src/field_table.cpp', 'w').write('\n'.join(out))
print(len(rows), 'rows')
