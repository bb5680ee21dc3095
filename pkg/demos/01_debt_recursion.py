"""Walk through the accounting backbone: one period of the debt recursion,
the stability surplus, the scope conditions, and the debt-reduction paradox.

Run:  python demos/01_debt_recursion.py
"""

from debtregime import (
    EconState,
    FiscalResponse,
    RegimeParams,
    check_scope,
    effective_deficit,
    paradox_test,
    stability_surplus,
    step_debt,
    step_debt_stochastic,
)

# March-2026 operating point: 240% debt, -0.8% spread, 2% deficit
econ = EconState(b_prev=2.40, r_n=0.022, g_n=0.030, pi=0.027, d=0.020)
regime = RegimeParams()

print("== one period of the recursion ==")
print(f"b     = {econ.b_prev:.4f}")
print(f"b'    = {step_debt(econ):.4f}")
print(f"db    = {step_debt(econ) - econ.b_prev:+.4f}  "
      f"(spread contributes {econ.spread * econ.b_prev:+.4f}, deficit {econ.d:+.4f})")

print("\n== stability condition ==")
surplus = stability_surplus(econ, regime)
print(f"surplus = {surplus * 100:+.4f}%/yr -> "
      + ("inside the corridor" if surplus >= 0 else "slightly outside: the "
         "ratio drifts up at this operating point"))

scope = check_scope(regime)
print(f"captive share condition: {scope['sc1']}   "
      f"depreciation window: {scope['sc2']}")

print("\n== bounded shocks leave the expected path unchanged ==")
up = step_debt_stochastic(econ, sigma=0.01, eta=+1.0)
dn = step_debt_stochastic(econ, sigma=0.01, eta=-1.0)
print(f"b' under +/- shocks: {up:.4f} / {dn:.4f}; midpoint {0.5 * (up + dn):.4f} "
      f"equals the deterministic {step_debt(econ):.4f}")

print("\n== deficit-relief response and the paradox ==")
fr = FiscalResponse(mode="deficit_relief", d0=0.020, gamma=0.005, b_ref=2.40)
for b in (2.30, 2.40, 2.50):
    print(f"  d({b:.2f}) = {effective_deficit(fr, b) * 100:.2f}% of GDP")
res = paradox_test(econ.spread, fr.gamma)
print(f"flow derivative wrt b = {res['derivative'] * 100:+.2f} pp -> "
      + ("paradox: lowering the stock worsens the flow"
         if res["paradox_holds"] else "no paradox at this relief strength"))
print(f"relief threshold: gamma* = {abs(econ.spread) * 100:.1f} pp")
