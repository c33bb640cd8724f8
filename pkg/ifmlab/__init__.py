__all__ = ["errors", "core", "networks", "protocols", "generalized", "montecarlo", "adapters", "schema", "worker", "utils", "cli"]
