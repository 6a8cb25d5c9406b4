"""Generating functions of the partition families against brute-force enumeration."""

from tschur.families import (
    FamilySpec,
    family_gf,
    oracle_t_schur,
    oracle_t_schur_over,
    oracle_t_schur_over_direct,
)

N = 16

over = family_gf(FamilySpec("overpartition"), N).coeffs()
print("overpartitions          ", over)

for t in (3, 5, 9):
    series = family_gf(FamilySpec("tschur-over", t), N).coeffs()
    doubled = [oracle_t_schur_over(t, n) for n in range(N)]
    direct = [oracle_t_schur_over_direct(t, n) for n in range(N)]
    print(f"t={t} overpartition series", series, series == doubled == direct)

for t in (3, 5):
    series = family_gf(FamilySpec("tschur", t), N).coeffs()
    print(f"t={t} partition series    ", series, series == [oracle_t_schur(t, n) for n in range(N)])
