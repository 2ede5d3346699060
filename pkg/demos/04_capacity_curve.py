"""The embedding capacity curve: g(D) = H(D) - H(beta) above the noise
floor, capped by its upper concave envelope (the tangent line through the
origin up to the tangency point)."""
import numpy as np

from wpc import capacity_embedding

beta = 0.05
curve = capacity_embedding(beta, np.linspace(0.0, 0.5, 11))

print(f"beta = {beta}")
print(f"tangency point D* = {curve.d_star:.6f}, slope = {curve.slope:.6f}")
print(f"tangency residual = {curve.tangency_residual:.2e}\n")
print("   D        g(D)      envelope")
for d, g, e in zip(curve.d_grid, curve.g, curve.envelope):
    marker = "  <- line segment" if d < curve.d_star and e > g + 1e-12 else ""
    print(f"  {d:.2f}   {g:8.5f}   {e:8.5f}{marker}")
print(f"\ncapacity at D=1/2: {curve.envelope[-1]:.5f} = 1 - H({beta})")
