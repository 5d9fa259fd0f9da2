from setuptools import find_packages, setup

setup(
    name="qmi",
    version="0.1.0",
    description="Numerical checks for finite-dimensional quantum measurement theory",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.24.0",
        "jsonschema>=4.17.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={"test": ["pytest>=7.0.0", "hypothesis>=6.80.0"]},
    entry_points={"console_scripts": ["qmi = src.cli:main"]},
)
