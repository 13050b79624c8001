"""Watch third-order convergence happen.

Iterates each method on f4 (a tenfold root at x = 1) with 300 digits,
printing the error, the ratio e_{n+1}/e_n^3 and the running COC. For the
modified Potra-Ptak step the ratio settles on the asymptotic constant.
Modified Newton is included for contrast: its COC settles at 2.
"""

from multiroot.convergence import coc, iterate, mantissa_format
from multiroot.methods import MethodSpec, asymptotic_error_constant
from multiroot.problems import get_problem
from multiroot.scalar import make_scalar

p = get_problem("f4")
root = p.roots(300)[0]
x0 = make_scalar("1.2", 300)

print(f"{p.name}: {p.formula}, m = {p.multiplicity}")
print(f"asymptotic constant for mpp: {float(asymptotic_error_constant(p, precision=300)):.6f}")

for kind in ("mnewton", "mpp", "osada", "dong", "chun"):
    tr = iterate(p, MethodSpec(kind, p.multiplicity), x0, 5, root=root)
    print(f"\n{kind}")
    e = tr.errors
    for n in range(1, len(e)):
        ratio = float((tr.iterates[n] - root) / (tr.iterates[n - 1] - root) ** 3)
        order = coc(e[: n + 1])
        order = f"{float(order):.4f}" if order is not None else "—"
        print(f"  n={n}  e={mantissa_format(e[n]):>10}  e_n/e_(n-1)^3={ratio:+.6f}  COC={order}")
