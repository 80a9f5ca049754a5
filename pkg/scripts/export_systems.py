"""Write every built-in system to src/modsyntax/systems/NAME.mas."""

from pathlib import Path

from modsyntax.stdlib import builtin_systems
from modsyntax.system import dump_system

OUT = Path(__file__).resolve().parent.parent / "src" / "modsyntax" / "systems"


def main():
    OUT.mkdir(exist_ok=True)
    for name, system in builtin_systems().items():
        path = OUT / f"{name}.mas"
        path.write_text(dump_system(system))
        print(path)


if __name__ == "__main__":
    main()
