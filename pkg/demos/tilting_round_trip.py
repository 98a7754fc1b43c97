"""The APR tilting complex over kA2: its endomorphism algebra and the round trip through it."""

from pdcbench.complexes import complex_from_module
from pdcbench.samples import apr_tilting_complex, endomorphism_algebra, indecomposables, tilting_bimodule_complex
from pdcbench.validators import PseudoDualizingCandidate, bounded_equivalence_roundtrip, check_dedualizing


def main():
    t = apr_tilting_complex()
    end, maps = endomorphism_algebra(t)
    print("End(T):", end.dim, "dimensional,", len(end.primitive_idempotents()), "vertices, radical dim",
          end.radical().cols)
    T = tilting_bimodule_complex()[0]
    c = PseudoDualizingCandidate(T, name="T")
    print("dedualizing:", check_dedualizing(c).verdict)
    for m in indecomposables(c.left):
        rt = bounded_equivalence_roundtrip(complex_from_module(m), c, side="E")
        print(f"  L ⊗ RHom(L, {m.name}) -> {m.name}: {rt.verdict}")
    for m in indecomposables(c.right):
        rt = bounded_equivalence_roundtrip(complex_from_module(m), c, side="F")
        print(f"  {m.name} -> RHom(L, L ⊗ {m.name}): {rt.verdict}")


if __name__ == "__main__":
    main()
