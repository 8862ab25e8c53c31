#!/usr/bin/env python3
from setuptools import setup, find_packages

setup(
    name="aniso-levy",
    version="1.0.0",
    description="Density regularity checks and experiments for SDEs driven by anisotropic Levy noise",
    author="aniso-levy Team",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.9",
        "pydantic>=2.0",
        "matplotlib>=3.5",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "aniso-levy=aniso_levy.cli:main",
        ],
    },
    include_package_data=True,
)
