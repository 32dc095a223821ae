#!/usr/bin/env python3
"""Simple script to verify the installation and imports."""

import sys


def verify_installation():
    """Verify that all required modules can be imported."""
    print("Verifying restricted-gamma installation...\n")

    errors = []

    modules_to_test = [
        ("restricted_gamma", "Core package"),
        ("restricted_gamma.numerics", "Numerics module"),
        ("restricted_gamma.regression", "Regression module"),
        ("restricted_gamma.constraints", "Restrictions and truncated normal module"),
        ("restricted_gamma.bayes", "Bayesian samplers"),
        ("restricted_gamma.simulation", "Simulation module"),
        ("restricted_gamma.diagnostics", "Diagnostics module"),
        ("restricted_gamma.config", "Configuration module"),
        ("restricted_gamma.cli", "Command line"),
    ]

    for module_name, description in modules_to_test:
        try:
            __import__(module_name)
            print(f"✓ {description}: OK")
        except ImportError as e:
            print(f"✗ {description}: FAILED - {e}")
            errors.append((module_name, e))

    print("\nVerifying external dependencies...\n")

    dependencies = [
        ("numpy", "Array computing"),
        ("scipy", "Special functions and LAPACK"),
        ("pandas", "CSV ingestion and reports"),
        ("pydantic", "Configuration validation"),
        ("pydantic_settings", "Environment settings"),
        ("envyaml", "Config files with environment variables"),
        ("click", "CLI framework"),
        ("structlog", "Structured logging"),
        ("yaml", "YAML parsing"),
    ]

    for dep_name, description in dependencies:
        try:
            __import__(dep_name)
            print(f"✓ {description}: OK")
        except ImportError as e:
            print(f"✗ {description}: FAILED - {e}")
            errors.append((dep_name, e))

    print("\n" + "=" * 60)

    if errors:
        print(f"\n❌ Installation verification FAILED with {len(errors)} errors")
        print("\nTo fix, run:")
        print("  pip install -e .")
        return False
    else:
        print("\n✅ Installation verification PASSED!")
        print("\nNext steps:")
        print("  1. Export the body-fat data as described in data/README.md")
        print("  2. Run: restricted-gamma fit --config example.config.yaml")
        return True


if __name__ == "__main__":
    success = verify_installation()
    sys.exit(0 if success else 1)
