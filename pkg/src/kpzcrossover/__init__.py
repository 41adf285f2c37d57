"""KPZ crossover distribution: Fredholm determinant formulas, a Painleve-type
integro-differential check, and a WASEP Monte Carlo comparison."""

__version__ = "0.1.0"
