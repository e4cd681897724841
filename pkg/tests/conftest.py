import hypothesis

# exact integer arithmetic has high variance per example; wall-clock deadlines
# only produce flaky failures here
hypothesis.settings.register_profile("exact", deadline=None, max_examples=100)
hypothesis.settings.load_profile("exact")
