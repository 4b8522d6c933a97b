from setuptools import setup
import codecs


with codecs.open('README.rst', encoding='utf-8') as readme_file:
    long_description = readme_file.read()

setup(
    name="fredholm_bvp",
    version='0.1.0',
    description="Fredholm analysis and numerical solution of general linear boundary-value problems",
    long_description=long_description,

    license='Apache 2.0',
    packages=['fredholm_bvp'],

    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 2.7 ',
        'Programming Language :: Python :: 3 ',
    ],

    keywords='boundary value problems, ordinary differential equations, Fredholm operators, '
             'characteristic matrix, fractional derivatives, multipoint conditions',

    # List run-time dependencies here. These will be installed by pip when your project is installed.
    install_requires=[
        'numpy >= 1.13',
        'scipy >= 0.19.0',
        'pandas >= 0.20.0',
        'scikit-learn >= 0.18',
    ],

    entry_points={
        'console_scripts': ['fredholm-bvp=fredholm_bvp.cli:main'],
    },
)
