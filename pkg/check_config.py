import sys

from services.config_service import ConfigError, load_config
from solver.stability import analyze


def check_config_file(path: str) -> bool:
    """Check a run configuration file and print a short report"""
    print(f"\n==== Checking run configuration {path} ====\n")

    try:
        config = load_config(path)
    except ConfigError as e:
        print(f"❌ {e}")
        print("\n==== End of configuration check ====\n")
        return False

    print(f"✅ problem = {config.problem}")
    if config.benchmark is None:
        print(f"✅ network layers = {list(config.layers)} ({config.activation})")
        print(f"✅ grid = {config.grid_m} nodes, quadrature = {config.quadrature}")
    if config.problem == "piab":
        print(f"✅ n = {config.n}, energy init = [{config.energy_init_lo}, {config.energy_init_hi}]")
    print(f"✅ swarm = {config.swarm_size} particles, {config.max_iters} iterations, seed = {config.seed}")

    verdict = analyze(config.beta, config.c1, config.c2)
    if verdict.closed_form_stable:
        print(f"✅ beta = {config.beta}, c1 = {config.c1}, c2 = {config.c2} inside the stable region")
    else:
        print(f"⚠️ beta = {config.beta}, c1 = {config.c1}, c2 = {config.c2} outside the stable region (allow_unsafe set)")
    print(f"ℹ️ max amplification factor = {verdict.max_amplification:.6f}")

    print("\n==== End of configuration check ====\n")
    return True


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("Usage: python check_config.py <config> [<config> ...]")
        sys.exit(1)
    results = [check_config_file(path) for path in sys.argv[1:]]
    sys.exit(0 if all(results) else 1)
