from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="chartnotes",
    version="0.1.0",
    author="chartnotes Team",
    description="Declarative chart annotation compiler with collision-aware layout and SVG output",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    package_data={
        "chartnotes.scene": ["metrics.yaml"],
        "chartnotes.render": ["templates/*.j2"],
    },
    include_package_data=True,
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Developers",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    python_requires=">=3.9",
    install_requires=[
        "pydantic>=2.6.0",
        "pydantic-settings>=2.1.0",
        "numpy>=1.26.3",
        "jinja2>=3.1.6",
        "python-dotenv>=1.0.1",
        "pyyaml>=6.0.1",
        "click>=8.1.7",
        "lark>=1.1.9",
    ],
    entry_points={
        "console_scripts": [
            "chartnotes=chartnotes.cli:cli",
        ],
    },
)
