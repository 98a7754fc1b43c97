"""Scalar extension k -> kA2: condition (iv) and agreement of the membership tests."""

from pdcbench.algebra import ground_algebra, kA2
from pdcbench.linalg import ExactMatrix, QQ
from pdcbench.samples import modules_up_to_dim, regular_complex
from pdcbench.validators import check_relative_condition_iv, membership_base_change_test


def main():
    R = kA2()
    L, U = regular_complex(ground_algebra()), regular_complex(R)
    phi = ExactMatrix.column(QQ, R.unit)
    rep = check_relative_condition_iv(L, U, phi, phi, {0: phi})
    print("relative condition (iv):", rep.verdict)
    for m in modules_up_to_dim(R, 3)[1:]:
        res = membership_base_change_test(m, L, U, phi, phi)
        print(f"  {m.name:<10} agree: {res.agree}  {res.over}")


if __name__ == "__main__":
    main()
