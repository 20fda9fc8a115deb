from setuptools import find_packages, setup

setup(
    name='realign',
    version='0.1.0',
    description='Real interference alignment simulator: exact direction sets, rational-dimension constellations and Monte Carlo DOF sweeps.',
    long_description=open('README.md', encoding='utf-8').read(),
    long_description_content_type='text/markdown',
    license='Apache-2.0',
    python_requires='>=3.10',
    package_dir={'': 'src'},
    packages=find_packages(where='src'),
    install_requires=['pyyaml>=6.0', 'numpy>=1.24', 'scipy>=1.10'],
    extras_require={'dev': ['pytest>=7.0', 'hypothesis>=6.0']},
    entry_points={'console_scripts': ['ria=ria_runtime.cli:main']},
    keywords=[
        'interference-alignment',
        'degrees-of-freedom',
        'wireless',
        'diophantine-approximation',
        'monte-carlo',
        'simulation',
    ],
)
