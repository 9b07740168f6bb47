from setuptools import setup, find_packages

setup(
    name="sturmian-regularity",
    version="1.0.0",
    author="Sturmian Regularity Developers",
    description="Exact continued fraction, Sturmian word and spectral regularity experiments",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    install_requires=[
        "numpy>=1.24.0",
        "pandas>=1.5.0",
        "mpmath>=1.3.0",
        "PyYAML>=6.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "hypothesis>=6.80.0",
            "flake8>=6.0.0",
        ]
    },
    entry_points={
        "console_scripts": [
            "sturmian=main:main",
        ]
    },
    python_requires=">=3.8",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
