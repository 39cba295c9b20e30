"""Setup script for neutral4."""

from setuptools import setup, find_packages

setup(
    name="neutral4",
    version="0.1.0",
    description="Construction and verification toolkit for neutral (2,2) four-dimensional geometry",
    author="Thuli Studios",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        # Dependencies are managed by Poetry
        # See pyproject.toml
    ],
    entry_points={"console_scripts": ["neutral4=neutral4.cli:main"]},
)
