#!/usr/bin/env python3
"""
Setup script for rigidity-lab
"""

from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="rigidity-lab",
    version="0.1.0",
    description="Exact-arithmetic verification of codimension counts and "
    "supermaximal-singularity exclusion",
    long_description=long_description,
    long_description_content_type="text/markdown",
    py_modules=["rigiditylab"],  # the entry-point shim
    packages=find_packages(include=["rlab", "rlab.*"]),
    package_data={"rlab": ["data/*.json"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Operating System :: OS Independent",
        "Environment :: Console",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    # 3.8+: math.comb, math.isqrt and functools.cached_property.
    python_requires=">=3.8",
    install_requires=[
        "pydantic>=2",
        "typing_extensions>=4.6",
    ],
    entry_points={
        "console_scripts": [
            "rigidity-lab=rlab.main:main",
        ],
    },
)
