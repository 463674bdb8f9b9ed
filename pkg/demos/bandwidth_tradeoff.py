"""Map the size-power tradeoff behind the Bartlett bandwidth choice.

For an observed loss differential, every bandwidth M buys size control
at the price of power: small M keeps the variance estimate tight but
understates long-run dependence (the fixed-b test then over-rejects on
persistent series), large M fixes the size at the cost of a wider
critical value. The curve below quantifies both sides per bandwidth and
marks where the test actually rejects on the data at hand.
"""

import numpy as np
from scipy import signal

from epatest import TradeoffConfig, bandwidth, build_tradeoff_curve

P = 96


def persistent_series(rng):
    # AR(1) loss differential with a modest mean shift: dependence strong
    # enough to punish tiny bandwidths, signal weak enough to be at stake
    eps = rng.standard_normal(500 + P)
    return signal.lfilter([1.0], [1.0, -0.6], eps)[500:] * 0.8 + 0.18


def main():
    rng = np.random.default_rng(9)
    d = persistent_series(rng)
    automatic = bandwidth("llsw", P)

    config = TradeoffConfig(n_sim=2000, seed=0)
    curve = build_tradeoff_curve(d, config)

    print(f"n = {P}, automatic bandwidth llsw({P}) = {automatic}")
    print()
    print(f"{'M':>3} {'size distortion':>16} {'max power loss':>15}  rejects")
    for point in curve:
        marker = " <- automatic" if point.M == automatic else ""
        flag = "yes" if point.rejected else "no"
        print(f"{point.M:>3} {point.size_distortion:>+16.4f} "
              f"{point.max_power_loss:>15.4f}  {flag:<3}{marker}")
    print()
    at_one = curve[0]
    at_auto = next(p for p in curve if p.M == automatic)
    flip = next((p.M for p in curve if not p.rejected), None)
    print(f"from M = 1 to the automatic M = {automatic}, simulated size distortion")
    print(f"falls {at_one.size_distortion:+.3f} -> {at_auto.size_distortion:+.3f} while the "
          f"worst-case power loss rises {at_one.max_power_loss:.3f} -> {at_auto.max_power_loss:.3f};")
    print(f"on this series the rejection itself does not survive past M = {flip - 1},")
    print("which is exactly the call the curve is meant to inform.")


if __name__ == "__main__":
    main()
