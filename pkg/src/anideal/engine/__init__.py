"""
Numerical and algebraic core: expressions, interval Taylor arithmetic,
certified root isolation, divisor-based ideal algebra and the exact
polynomial oracle.
"""
