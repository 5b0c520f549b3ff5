"""qausim setup.

Note: This file exists for backwards compatibility.
      The primary build configuration is in pyproject.toml.
"""
from setuptools import find_packages, setup

setup(
    name="qausim",
    version="0.1.0",
    description="qausim: ASM and QCN congestion-control simulator and fluid analysis",
    package_dir={"": "src"},
    packages=find_packages(where="src"),
    package_data={"qausim.topology": ["scenarios/*.cfg"]},
    python_requires=">=3.10",
    install_requires=[
        "click>=8.0",
        "blake3>=0.3.0",
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "networkx>=3.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "pytest-cov>=4.0",
            "ruff>=0.1.0",
            "mypy>=1.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "qausim=qausim.cli.main:cli",
        ],
    },
)
