import os
import uuid
from datetime import datetime


class RunLog:
    """Creates a runlog instance for a command run.

    Args:
        out_dir (str): Output directory of the run; "-" keeps no log file.
        command (str): Name of the command being run.
        file_exists_func (Callable): Tests whether a path exists.
        mkdir_func (Callable): Creates a directory.
    """

    def __init__(
        self,
        out_dir,
        command,
        file_exists_func=os.path.exists,
        mkdir_func=os.makedirs,
    ):
        self.out_dir = out_dir
        self.command = command
        self.file_exists_func = file_exists_func
        self.mkdir_func = mkdir_func
        self.started = datetime.now()
        self.run_id = (
            f"{self.started.strftime('%Y%m%d%H%M%S')}_{uuid.uuid4()}"
        )
        self.run_logs_folder = (
            None if out_dir == "-" else os.path.join(out_dir, "run_logs")
        )

    def header_line(self) -> str:
        """The timestamp comment line written at the top of every CSV."""
        return (
            f"generated {self.started.isoformat(timespec='seconds')} "
            f"run_id {self.run_id}"
        )

    def save_run_id(self) -> str:
        """Appends the run ID and command to run_logs/run_ids.txt."""
        if self.run_logs_folder is None:
            return self.run_id
        if not self.file_exists_func(self.run_logs_folder):
            self.mkdir_func(self.run_logs_folder)
        run_id_file = os.path.join(self.run_logs_folder, "run_ids.txt")
        with open(run_id_file, "a") as file:
            file.write(f"{self.run_id} {self.command}\n")
        return self.run_id


def start_run(config) -> str | None:
    """Record the run and return its CSV header line.

    Args:
        config (RunConfig): Settings of the run.

    Returns:
        str | None: The timestamp line, or None when timestamps are off.
    """
    if not config.timestamp:
        return None
    runlog = RunLog(config.out_dir, config.command)
    runlog.save_run_id()
    return runlog.header_line()
