import hypothesis

# Property tests share the suite with end-to-end runs; wall-clock deadlines
# only add flake on loaded machines.
hypothesis.settings.register_profile(
    "suite", deadline=None, derandomize=True, max_examples=60
)
hypothesis.settings.load_profile("suite")
