"""
Shared utilities: error types, seeded random streams and command decorators.
"""
