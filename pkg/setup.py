from setuptools import setup, find_packages

setup(
    name="trichain",
    version="1.0.0",
    packages=find_packages(include=['src', 'src.*']),
    package_dir={'': '.'},
    py_modules=['main'],
    include_package_data=True,
    install_requires=[],
    extras_require={
        'test': ['pytest==7.4.0', 'sympy>=1.12'],
    },
    entry_points={
        'console_scripts': ['trichain=main:main'],
    },
    python_requires=">=3.9",
)
