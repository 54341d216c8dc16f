"""Which actuator losses can a system survive?

Walks the two built-in case studies through the qualitative analysis: for
each single lost actuator, can the remaining ones always counteract it
(nonempty control-deficit set), and do the bounded-input conditions for
resilient stabilizability / full resilience hold?
"""

import resilience_kit as rk


def report(system, lost):
    split = rk.split_system(system, [lost])
    v = rk.check_resilience(system, split)
    label = system.actuator_labels[lost]
    if v.z_empty:
        status = "deficit set EMPTY - loss cannot be counteracted"
    else:
        status = (f"dim Z = {v.z_dim}, rank ok = {v.rank_condition}, "
                  f"spectrum = {v.spectrum_condition}, "
                  f"stabilizable = {v.resiliently_stabilizable}, "
                  f"resilient = {v.resilient}")
    print(f"  lose {label:26s} -> {status}")


def main():
    for name in ("admire", "temperature", "double_integrator"):
        scn = rk.load_scenario(name)
        print(f"\n=== {name} ({scn.system.n} states, "
              f"{scn.system.B_bar.shape[1]} actuators) ===")
        print(f"  {scn.notes}")
        for lost in range(scn.system.B_bar.shape[1]):
            report(scn.system, lost)

    print("\nReading the results:")
    print(" * the jet can counteract any single control-surface loss (1-8)")
    print("   but not a thrust-vectoring loss (9-10); even in the good cases")
    print("   it is not resiliently stabilizable because of its unstable mode.")
    print(" * the building stays stabilizable after any single loss, but its")
    print("   strictly stable spectrum rules out full resilience (it cannot")
    print("   hold every state against the worst-case malfunction).")
    print(" * the double integrator with inputs along the same axis stays")
    print("   fully resilient when the weaker actuator is lost.")


if __name__ == "__main__":
    main()
