"""Validate candidate complexes and sort modules into the two classes."""

from pdcbench.algebra import dual_numbers, upper_triangular
from pdcbench.samples import dual_regular_complex, modules_up_to_dim, simple_bimodule_complex
from pdcbench.validators import (
    PseudoDualizingCandidate,
    auslander_membership,
    bass_membership,
    check_dedualizing,
    check_dualizing,
    check_homothety,
)


def show(report):
    print(f"  {report.check}: {report.verdict}")
    for a in report.axioms:
        cert = a.certificate.get("kind") if a.certificate else "-"
        print(f"    {a.name:<28} {a.verdict:<12} certificate: {cert}")


def main():
    D = dual_numbers()
    for label, cx in [("D(A) over k[x]/(x^2)", dual_regular_complex(D)),
                      ("S over k[x]/(x^2)", simple_bimodule_complex(D)),
                      ("D(A) over UT2", dual_regular_complex(upper_triangular()))]:
        c = PseudoDualizingCandidate(cx)
        print(label)
        for check in (check_homothety, check_dedualizing, check_dualizing):
            show(check(c))

    c = PseudoDualizingCandidate(dual_regular_complex(D))
    print("class membership for L = D(A) over k[x]/(x^2):")
    for m in modules_up_to_dim(D, 3)[1:]:
        b, a = bass_membership(m, c), auslander_membership(m, c)
        print(f"  {m.name:<10} bass: {b.status:<14} auslander: {a.status}")


if __name__ == "__main__":
    main()
