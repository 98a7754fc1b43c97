"""Write demos/workspaces/tilting.json: the APR tilting complex over kA2 with B = End(T)^op.

The right B-action comes from the strict chain endomorphisms of T, so the
file is generated rather than typed by hand.
"""

from pathlib import Path

from pdcbench.samples import injectives, projectives, tilting_bimodule_complex
from pdcbench.validators import PseudoDualizingCandidate
from pdcbench.workspace import Workspace, save_workspace

OUT = Path(__file__).parent / "workspaces" / "tilting.json"


def build():
    T, end, _ = tilting_bimodule_complex()
    A, B = T.left, T.right
    ws = Workspace()
    ws.algebras["A"] = A
    ws.algebras["B"] = B
    for i, J in enumerate(injectives(A), 1):
        J.name = f"I{i}"
        ws.modules[J.name] = J
    for i, P in enumerate(projectives(B), 1):
        P.name = f"Q{i}"
        ws.modules[P.name] = P
    for n in T.degrees:
        T[n].name = f"T{n}".replace("-", "m")
        ws.modules[T[n].name] = T[n]
    ws.complexes["T"] = T
    ws.candidates["tilt"] = PseudoDualizingCandidate(T, name="tilt")
    ws.tasks = [
        {"op": "check-pdc", "candidate": "tilt"},
        {"op": "check-dedualizing", "candidate": "tilt"},
        {"op": "check-dualizing", "candidate": "tilt"},
        {"op": "membership", "candidate": "tilt"},
        {"op": "class-axioms", "candidate": "tilt", "e": ["I1", "I2"], "f": ["Q1", "Q2"], "l2": 1},
        {"op": "roundtrip", "candidate": "tilt", "object": "I1", "class": "bass"},
    ]
    return ws


if __name__ == "__main__":
    save_workspace(build(), OUT)
    print(f"wrote {OUT}")
