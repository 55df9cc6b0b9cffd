"""The q-monopole over the Podles sphere, symbolic in q and s.

Build the quotient map onto the grouplike coalgebra, certify it in low
degree, then look at the connection form on the first grouplike and the
projector of the associated line bundle.
"""
import time

from qbundle import monopole as mp

ctx = mp.MonopoleContext()
print("pi(xi) =", ctx.pi(ctx.xi), " pi(eta) =", ctx.pi(ctx.eta), " pi(zeta) =", ctx.pi(ctx.zeta))

for deg in range(4):
    cert = mp.PiReducer(ctx, deg).certificate()
    print(f"degree <= {deg}: quotient dimension {cert.data['quotient']}  (expected {2 * deg + 1})")

lift = ctx.i(1)
print("lift of the first grouplike:", lift)
print("pi of the lift:", ctx.pi(lift))

omega = ctx.omega(1)
print("connection form on g1+ has", len(omega), "tensor terms")

proj = ctx.projector()
print("projector entries:")
for row in proj:
    print("   ", [str(x) for x in row])

for suite in ("grouplikes", "splitting", "omega", "connection", "projector"):
    t0 = time.perf_counter()
    rep = mp.run_suite(ctx, suite, N=2, degree=4)
    print(f"{suite:>11}: {'pass' if rep.passed else 'FAIL'}  {len(rep.checks)} checks  {time.perf_counter() - t0:.1f}s")

print("classical limit, trace of the projector is 1:", mp.classical_trace(1, 0).passed)
