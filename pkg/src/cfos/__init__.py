# src/cfos/__init__.py

"""cfos - counterfactual-based minority oversampling for imbalanced tabular data"""

__version__ = "0.1.0"
