# setup.py
from setuptools import setup, find_packages

setup(
    name="cfos",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "click>=8.0.0",
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.22",
        "scipy>=1.10",
        "pandas>=1.5",
        "scikit-learn>=1.0",
        "tabulate>=0.8.9",
    ],
    entry_points={
        "console_scripts": [
            "cfos=cfos.cli:main",
        ],
    },
    python_requires=">=3.9",
    author="Paradise Labs",
    description="cfos - counterfactual-based minority oversampling",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
