"""Run the solver CLI. Usage: python -m services.solver.src"""
from .cli import main

if __name__ == "__main__":
    main()
