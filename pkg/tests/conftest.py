from hypothesis import settings

# Deterministic property tests: same examples every run.
settings.register_profile("ci", derandomize=True, deadline=None)
settings.load_profile("ci")
