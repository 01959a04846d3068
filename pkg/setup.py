"""
Setup script for fibnormal package
"""

from setuptools import setup, find_packages

setup(
    name="fibnormal",
    version="0.1.0",
    description="Streaming digit statistics of the concatenated Fibonacci constant",
    author="fibnormal Team",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "mpmath>=1.2",
        "gmpy2>=2.1",
    ],
    extras_require={
        "test": ["pytest>=7", "sympy>=1.10"],
    },
    entry_points={
        "console_scripts": [
            "fibnormal=main:main",
        ],
    },
)
