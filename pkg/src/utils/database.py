"""
Run Registry Module

SQLite store of command-line runs and the verdicts they produced, read
back by the status command.
"""

import sqlite3
import pandas as pd
from pathlib import Path
from typing import Optional, List, Dict, Any
import logging
from datetime import datetime

logger = logging.getLogger(__name__)


class RunRegistry:
    """
    Records runs and verdicts in a SQLite database.
    """

    def __init__(self, db_path: str = "data/runs.db"):
        """
        Initialize the registry.

        Args:
            db_path: Path to SQLite database file
        """
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)
        self._init_database()

    def _init_database(self) -> None:
        """Create tables if they don't exist."""
        with sqlite3.connect(self.db_path) as conn:
            conn.execute("""
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    command TEXT NOT NULL,
                    config_digest TEXT NOT NULL,
                    status TEXT NOT NULL, -- 'running', 'ok', 'failed'
                    exit_code INTEGER,
                    started_at TIMESTAMP NOT NULL,
                    finished_at TIMESTAMP
                )
            """)

            conn.execute("""
                CREATE TABLE IF NOT EXISTS verdicts (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL REFERENCES runs(id),
                    quantity TEXT NOT NULL,
                    slope TEXT NOT NULL,
                    alpha REAL,
                    verdict TEXT NOT NULL,
                    recorded_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                )
            """)

            conn.execute("CREATE INDEX IF NOT EXISTS idx_verdicts_run ON verdicts(run_id)")
            conn.commit()
            logger.debug(f"Run registry ready at {self.db_path}")

    def start_run(self, command: str, config_digest: str) -> int:
        """
        Register a new run.

        Returns:
            Run id
        """
        with sqlite3.connect(self.db_path) as conn:
            cursor = conn.execute(
                "INSERT INTO runs (command, config_digest, status, started_at) VALUES (?, ?, 'running', ?)",
                (command, config_digest, datetime.now().isoformat()))
            conn.commit()
            return int(cursor.lastrowid)

    def finish_run(self, run_id: int, exit_code: int) -> None:
        status = 'ok' if exit_code == 0 else 'failed'
        with sqlite3.connect(self.db_path) as conn:
            conn.execute("UPDATE runs SET status = ?, exit_code = ?, finished_at = ? WHERE id = ?",
                         (status, exit_code, datetime.now().isoformat(), run_id))
            conn.commit()

    def record_verdicts(self, run_id: int, records: List[Dict[str, Any]]) -> int:
        """
        Store verdicts of a run.

        Args:
            run_id: Run the verdicts belong to
            records: Dicts with quantity, slope, alpha and verdict

        Returns:
            Number of rows inserted
        """
        if not records:
            return 0
        missing = [key for key in ('quantity', 'slope', 'verdict') if any(key not in r for r in records)]
        if missing:
            raise ValueError(f"Missing required verdict fields: {missing}")
        try:
            with sqlite3.connect(self.db_path) as conn:
                conn.executemany(
                    "INSERT INTO verdicts (run_id, quantity, slope, alpha, verdict) VALUES (?, ?, ?, ?, ?)",
                    [(run_id, r['quantity'], r['slope'], r.get('alpha'), r['verdict']) for r in records])
                conn.commit()
            logger.info(f"Stored {len(records)} verdicts for run {run_id}")
            return len(records)
        except sqlite3.Error as e:
            logger.error(f"Error storing verdicts: {e}")
            raise

    def get_runs(self, limit: Optional[int] = None) -> pd.DataFrame:
        query = "SELECT * FROM runs ORDER BY id DESC"
        params: List[Any] = []
        if limit:
            query += " LIMIT ?"
            params.append(limit)
        with sqlite3.connect(self.db_path) as conn:
            return pd.read_sql_query(query, conn, params=params)

    def get_verdicts(self, run_id: Optional[int] = None) -> pd.DataFrame:
        query = "SELECT run_id, quantity, slope, alpha, verdict FROM verdicts"
        params: List[Any] = []
        if run_id is not None:
            query += " WHERE run_id = ?"
            params.append(run_id)
        query += " ORDER BY id"
        with sqlite3.connect(self.db_path) as conn:
            return pd.read_sql_query(query, conn, params=params)

    def get_summary_stats(self) -> Dict[str, Any]:
        """
        Summary of the registry.

        Returns:
            Dictionary of run counts, verdict tallies and the latest run
        """
        try:
            with sqlite3.connect(self.db_path) as conn:
                total_runs = conn.execute("SELECT COUNT(*) FROM runs").fetchone()[0]
                by_status = dict(conn.execute("SELECT status, COUNT(*) FROM runs GROUP BY status").fetchall())
                tallies = pd.read_sql_query(
                    "SELECT quantity, verdict, COUNT(*) AS count FROM verdicts "
                    "GROUP BY quantity, verdict ORDER BY quantity, verdict", conn)
                latest = conn.execute(
                    "SELECT id, command, status, exit_code, started_at FROM runs ORDER BY id DESC LIMIT 1"
                ).fetchone()

                return {
                    'total_runs': total_runs,
                    'runs_by_status': by_status,
                    'verdict_tallies': tallies.to_dict(orient='records'),
                    'latest_run': {
                        'id': latest[0], 'command': latest[1], 'status': latest[2],
                        'exit_code': latest[3], 'started_at': latest[4],
                    } if latest else None,
                }
        except sqlite3.Error as e:
            logger.error(f"Error getting summary stats: {e}")
            return {}


def main():
    """Print the registry summary."""
    registry = RunRegistry()
    stats = registry.get_summary_stats()
    print("Run Registry Summary:")
    for key, value in stats.items():
        print(f"  {key}: {value}")


if __name__ == "__main__":
    main()
