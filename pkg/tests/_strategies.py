from hypothesis import strategies as st

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)
quat_coeffs = st.lists(finite, min_size=4, max_size=4)
oct_coeffs = st.lists(finite, min_size=8, max_size=8)
