class ContractViolation(ValueError):
    """An operation was called with inputs that break its contract."""
