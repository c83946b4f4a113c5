from hypothesis import settings

# fixed example generation keeps the suite deterministic run to run
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")
