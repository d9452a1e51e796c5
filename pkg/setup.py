"""
Setup script for Graph Median Consensus
"""
from setuptools import setup, find_packages

setup(
    name="graph-median-consensus",
    version="1.0.0",
    description="Median consensus of partition ensembles on graphs, with grouping and baselines",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    include_package_data=True,
    install_requires=[
        "Flask==2.3.3",
        "click>=8.1",
        "marshmallow==3.20.1",
        "python-dotenv==1.0.0",
        "gunicorn==21.2.0",
        "numpy>=1.24",
        "scipy>=1.10",
    ],
    extras_require={
        "tests": [
            "pytest==7.4.2",
            "factory-boy==3.3.0",
            "hypothesis>=6.80",
        ],
    },
    entry_points={
        "console_scripts": [
            "medcon=medcon.cli:main",
        ],
    },
    python_requires=">=3.10",
)
