"""
Suite Configuration

Named settings for the verification scripts.
"""

SUITE_CONFIGS = {
    "quick": {
        "triples": "distinct",
        "samples": 0,
        "max_degree": 1,
        "oracle_instances": 5,
        "mutation_limit": 6,
        "identities": False,
    },

    "standard": {
        "triples": "distinct",
        "samples": 2,
        "max_degree": 2,
        "oracle_instances": 20,
        "mutation_limit": None,
        "identities": True,
    },

    "full": {
        "triples": "all",
        "samples": 5,
        "max_degree": 2,
        "oracle_instances": 50,
        "mutation_limit": None,
        "identities": True,
    },
}


def get_config(config_name):
    """Get suite configuration by name.

    Args:
        config_name: Name of the configuration

    Returns:
        Configuration dictionary
    """
    if config_name not in SUITE_CONFIGS:
        print(f"Available configurations: {list(SUITE_CONFIGS.keys())}")
        raise ValueError(f"Unknown configuration: {config_name}")

    return SUITE_CONFIGS[config_name].copy()


def list_configs():
    """List all available configurations."""
    print("Available suite configurations:")
    for name, config in SUITE_CONFIGS.items():
        print(f"  {name}:")
        print(f"    Triples: {config['triples']} (+{config['samples']} random samples)")
        print(f"    Max degree: {config['max_degree']}")
        print(f"    Oracle instances: {config['oracle_instances']}")
        print(f"    Mutants: {config['mutation_limit'] or 'all'}")
        print(f"    Identity suite: {'yes' if config['identities'] else 'no'}")
        print()
