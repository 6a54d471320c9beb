# Copyright (C) 2026 Reactive-DSP Authors
#
# This program is free software: you can redistribute it and/or modify it under the terms of the GNU
# General Public License as published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without
# even the implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with this program. If not,
#  see <https://www.gnu.org/licenses/>.

from pathlib import Path

import appdirs


class FileManager:
    """
    Manages file locations and directory structures for reactive-dsp: logs, configuration and the
    artefacts written by runs and verifications (traces, witnesses, FSM exports).
    """

    def __init__(self, base_dir=None, app_name="reactive_dsp", app_author="Reactive-DSP"):
        """
        Initialize the FileManager by setting the directory structure. Directories are only created
        by init_directories; existing files/folders are ok.

        Args:
            base_dir: Override for base directory (if None, uses appdirs)
            app_name: Name of the application
            app_author: Author/organization name
        """
        self.app_name = app_name
        self.app_author = app_author

        if base_dir is None:
            self._data_dir = Path(appdirs.user_data_dir(app_name, app_author))
            self._config_dir = Path(appdirs.user_config_dir(app_name, app_author))
            self._log_dir = Path(appdirs.user_log_dir(app_name, app_author))
        else:
            self._data_dir = Path(base_dir)
            self._config_dir = self._data_dir / "config"
            self._log_dir = self._data_dir / "logs"

        self._artefact_dir = self._data_dir / "artefacts"

    def init_directories(self):
        """Create folder structure."""
        for directory in [self.data_dir, self.config_dir, self.log_dir, self.artefact_dir]:
            directory.mkdir(parents=True, exist_ok=True)

    @property
    def data_dir(self):
        """Path to the data directory."""
        return self._data_dir

    @property
    def config_dir(self):
        """Path to the configuration directory."""
        return self._config_dir

    @property
    def log_dir(self):
        """Path to the logging directory."""
        return self._log_dir

    @property
    def artefact_dir(self):
        """Path to the directory holding default traces, witnesses and FSM exports."""
        return self._artefact_dir

    # ----------------------------------------------------------------------------------------------
    #  Artefact Methods
    # ----------------------------------------------------------------------------------------------

    def artefact_path(self, file_name: str):
        """
        Given a file name, return its location inside the artefact directory, creating the
        directory if needed.

        Args:
          file_name(str): Bare file name, e.g. 'S1_VIOLATED.witness.yaml'.

        Returns:
            Path: Location of the artefact.

        Raises:
            ValueError: If the file_name contains path separators.
            RuntimeError: If directory creation fails.
        """
        if '/' in file_name or '\\' in file_name:
            raise ValueError("file_name cannot contain path separators")

        try:
            self.artefact_dir.mkdir(exist_ok=True, parents=True)
        except Exception as e:
            raise RuntimeError(f"Failed to create directory {self.artefact_dir}: {e}") from e
        return self.artefact_dir / file_name
