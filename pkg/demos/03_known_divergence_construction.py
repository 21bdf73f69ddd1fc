#!/usr/bin/env python3
"""Anatomy of the known-divergence forgery.

An adversary that knows the honest sub-network divergences (s1, s2) and its
own centrality u can always fabricate likelihoods that deceive the network
for BOTH candidate true states. The trick: on a chosen pair of symbols the
two deception inequalities become linear in the transformed coordinates
x1 = ln(p1/(alpha-p2)), x2 = ln((alpha-p1)/p2), carving an open wedge whose
apex is a simple rational function of the scenario. Any wedge point maps
back to a valid forged model; the epsilon floor further trims the wedge.

This script prints the full geometry for one scenario, the selected point,
the recovered masses, and verifies both deception inequalities. It also
shows the single-parameter variant (tying both masses) failing on a
non-separable instance: the anti-diagonal misses the wedge entirely.
"""

from sociallearn import (
    adversary_contribution,
    bsc_model,
    distortion_region,
    known_divergence_attack,
    make_model,
    one_variable_feasibility,
)


def main():
    model = bsc_model(0.9)
    u_k, s1, s2, eps = 0.25, 0.5, 0.5, 0.01

    region = distortion_region(model, u_k, s1, s2, eps)
    print("Scenario: lone adversary, BSC p=0.9, u=0.25, s1=s2=0.5, eps=0.01\n")
    print(f"support pair:        {region.support_pair}")
    print(f"pair determinant d:  {region.d_k:+.4f}")
    print(f"wedge apex (x1',x2') = ({region.x1_prime:+.4f}, {region.x2_prime:+.4f})")
    print(f"floor box |x| <      {region.x_plus:.4f}")
    print(f"largest feasible eps: {region.epsilon_bound:.5f} "
          f"(requested {eps}, region {'empty' if region.empty else 'non-empty'})\n")

    entry = known_divergence_attack(model, u_k, s1, s2, eps)
    p = entry.params
    print(f"selected transformed point: x1={p['x1']:+.4f}, x2={p['x2']:+.4f} "
          f"(implied slope beta={p['beta']:+.4f})")
    print(f"recovered masses: p1={p['p1']:.6f}, p2={p['p2']:.6f}, "
          f"floor satisfied: {p['floor_satisfied']}")
    print(f"forged | theta1: {[round(v, 6) for v in entry.forged.given_theta1.mass]}")
    print(f"forged | theta2: {[round(v, 6) for v in entry.forged.given_theta2.mass]}\n")

    r1 = adversary_contribution(u_k, model, entry.forged, 1)
    r2 = adversary_contribution(u_k, model, entry.forged, 2)
    print("deception check (contribution must exceed the divergence):")
    print(f"  state 1: r = {r1:.4f} > s1 = {s1}  ->  {r1 > s1}")
    print(f"  state 2: r = {r2:.4f} > s2 = {s2}  ->  {r2 > s2}\n")

    print("single free parameter (p1 = p2) restricted to the anti-diagonal:")
    easy = one_variable_feasibility(model, u_k, 0.05, 0.05, 1e-3)
    print(f"  symmetric channel, small divergences: feasible = {easy}")
    hard_model = make_model([0.6, 0.3, 0.1], [0.7, 0.1, 0.2])
    hard = one_variable_feasibility(hard_model, 0.3, 0.5, 0.5, 1e-3, pair=(0, 1))
    print(f"  skewed pair with negative determinant: feasible = {hard} "
          "(two parameters are genuinely needed)")


if __name__ == "__main__":
    main()
