#!/usr/bin/env python3
"""
Ledger analytics and reporting
"""

import json
from datetime import datetime, timedelta

from .database import Database, DailyStatistic
from .logger import logger
from .report import SCHEMA_VERSION


class Analytics:
    def __init__(self, db: Database = None):
        self.db = db or Database()

    def generate_daily_stats(self):
        """Aggregate today's runs into a DailyStatistic row."""
        try:
            today_start = datetime.utcnow().replace(hour=0, minute=0, second=0, microsecond=0)
            runs = self.db.get_reports_since(today_start)

            commands = {}
            for run in runs:
                commands[run.command] = commands.get(run.command, 0) + 1
            failures = sum(1 for run in runs if run.exit_status != 0)

            stat = DailyStatistic(
                date=datetime.utcnow(),
                runs=len(runs),
                failures=failures,
                command_counts=json.dumps(commands, sort_keys=True),
            )
            with self.db.get_session() as session:
                session.add(stat)

            logger.info(f"Generated daily stats: {len(runs)} runs, {failures} failures")

            return {
                'date': today_start.date().isoformat(),
                'runs': len(runs),
                'failures': failures,
                'commands': commands,
            }
        except Exception as e:
            logger.error(f"Error generating daily stats: {e}")
            return None

    def get_summary(self, days=7, limit=10):
        """Totals, failure rate and per-command breakdown for the last N days."""
        cutoff = datetime.utcnow() - timedelta(days=days)
        runs = self.db.get_reports_since(cutoff)

        by_command = {}
        for run in runs:
            entry = by_command.setdefault(run.command, {'runs': 0, 'failures': 0, 'errors': 0})
            entry['runs'] += 1
            if run.exit_status == 1:
                entry['failures'] += 1
            elif run.exit_status == 2:
                entry['errors'] += 1
        failures = sum(1 for run in runs if run.exit_status == 1)

        return {
            'schema_version': SCHEMA_VERSION,
            'period': f"{days} days",
            'total_runs': len(runs),
            'failures': failures,
            'failure_rate': round(failures / len(runs), 4) if runs else 0.0,
            'commands': {name: by_command[name] for name in sorted(by_command)},
            'recent': [r.to_dict() for r in self.db.get_recent_reports(days=days, limit=limit)],
        }
