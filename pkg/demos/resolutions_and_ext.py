"""Resolutions, periodicity and Ext/Tor over the small sample algebras."""

from pdcbench.algebra import dual_numbers, kA2
from pdcbench.derived import WindowExceeded, ext, tor
from pdcbench.modules import flip, simple_modules
from pdcbench.resolutions import detect_periodicity, projective_resolution


def main():
    D = dual_numbers()
    s = simple_modules(D)[0]
    res = projective_resolution(s, 4)
    print("simple over k[x]/(x^2): term dims", [res.complex[n].dim for n in range(-4, 1)])
    cert = detect_periodicity(s, 4)
    print(f"  syzygies repeat from offset {cert.offset} with period {cert.period}")
    print("  Ext^n(S, S) for n = 0..4:", [ext(s, s, n) for n in range(5)])
    sr = flip(simple_modules(D.opposite())[0])
    print("  Tor_n(S, S) for n = 0..4:", [tor(sr, s, n) for n in range(5)])
    try:
        ext(s, s, 30, window=4)
    except WindowExceeded as exc:
        print("  asking beyond the window:", exc)

    A = kA2()
    s1, s2 = simple_modules(A)
    res = projective_resolution(s1, 4)
    print("S1 over kA2: resolution length", res.length())
    print("  Ext^1(S1, S2) =", ext(s1, s2, 1), " Ext^1(S2, S1) =", ext(s2, s1, 1))


if __name__ == "__main__":
    main()
