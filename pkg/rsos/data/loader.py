"""
Loader for the bundled ``.rs-spec`` example files.
"""

import logging
import warnings
from pathlib import Path
from typing import Dict, List, Optional, Union

from rsos.exceptions import SpecError, SpecLoadError, UnknownNameError
from rsos.parser import Spec, parse_spec

logger = logging.getLogger(__name__)

SUFFIX = ".rs-spec"


class SpecLoader:
    """
    Loads specifications shipped with the package.
    """

    def __init__(self, data_path: Optional[Path] = None):
        """
        Initialize spec loader.

        Args:
            data_path: Optional directory of ``.rs-spec`` files
        """
        if data_path:
            self.data_path = Path(data_path)
        else:
            self.data_path = Path(__file__).parent / "specs"

        if not self.data_path.is_dir():
            raise SpecLoadError(f"Spec directory not found at {self.data_path}")

    def available(self) -> List[str]:
        """
        Names of the bundled specifications.

        Returns:
            Sorted file stems, without the ``.rs-spec`` suffix
        """
        return sorted(
            path.name[: -len(SUFFIX)]
            for path in self.data_path.iterdir()
            if path.name.endswith(SUFFIX) and not path.name.startswith("_")
        )

    def path_for(self, name: str) -> Path:
        return self.data_path / f"{name}{SUFFIX}"

    def load_text(self, name: str) -> str:
        """
        Source text of a bundled specification.

        Args:
            name: Spec name as listed by :meth:`available`

        Returns:
            The file contents

        Raises:
            UnknownNameError: If no such spec is bundled
            SpecLoadError: If the file cannot be read
        """
        path = self.path_for(name)
        if not path.is_file():
            known = ", ".join(self.available()) or "none"
            raise UnknownNameError(f"no bundled spec '{name}' (available: {known})")
        try:
            return path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpecLoadError(f"Failed to read {path}: {e}")

    def load(self, name: str) -> Spec:
        """Parse a bundled specification."""
        return parse_spec(self.load_text(name))

    def load_all(self) -> Dict[str, Spec]:
        """
        Parse every bundled specification, skipping broken ones.

        Returns:
            Dictionary mapping spec names to parsed specs
        """
        specs = {}
        for name in self.available():
            try:
                specs[name] = self.load(name)
            except (SpecError, SpecLoadError) as e:
                warnings.warn(f"Failed to load spec {name}: {e}")
        return specs

    def validate(self) -> Dict[str, bool]:
        """
        Check that every bundled specification parses.

        Returns:
            Dictionary mapping spec names to validation status
        """
        validation = {}
        for name in self.available():
            try:
                self.load(name)
                validation[name] = True
            except (SpecError, SpecLoadError) as e:
                logger.warning("bundled spec %s is invalid: %s", name, e)
                validation[name] = False
        return validation


def resolve_spec(source: Union[str, Path], loader: Optional[SpecLoader] = None) -> Spec:
    """
    Parse a specification given as a file path or a bundled name.

    An existing file wins over a bundled spec of the same name.

    Args:
        source: Path to a ``.rs-spec`` file, or the name of a bundled one
        loader: Loader used for bundled names

    Returns:
        The parsed specification

    Raises:
        SpecLoadError: If ``source`` is neither a readable file nor a bundled name
        SpecError: If the text does not parse
    """
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpecLoadError(f"Failed to read {path}: {e}")
        return parse_spec(text)

    loader = loader or SpecLoader()
    if str(source) in loader.available():
        return loader.load(str(source))
    raise SpecLoadError(f"no such file or bundled spec: {source}")
