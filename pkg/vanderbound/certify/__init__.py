"""Certification runner (analyze one node set, randomized suites, oracle checks)."""
