#!/usr/bin/env python3
"""
Database models and operations for the report ledger
"""

import json
import os
from contextlib import contextmanager
from datetime import datetime, timedelta

from sqlalchemy import Column, DateTime, Float, Integer, String, Text, create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from .config import load_config
from .logger import logger

Base = declarative_base()


class ReportRecord(Base):
    __tablename__ = 'reports'

    id = Column(Integer, primary_key=True, autoincrement=True)
    command = Column(String(50), nullable=False, index=True)
    input_names = Column(Text)  # JSON array of file names
    input_digests = Column(Text)  # JSON array of SHA256 digests
    report_digest = Column(String(64), nullable=False, index=True)
    exit_status = Column(Integer, nullable=False, default=0)
    verdicts = Column(Text)  # JSON object lemma -> bool
    failed = Column(String(100), nullable=True)
    elapsed_seconds = Column(Float, default=0.0)
    created_at = Column(DateTime, default=datetime.utcnow, index=True)

    def to_dict(self):
        return {
            'id': self.id,
            'command': self.command,
            'input_names': json.loads(self.input_names) if self.input_names else [],
            'input_digests': json.loads(self.input_digests) if self.input_digests else [],
            'report_digest': self.report_digest,
            'exit_status': self.exit_status,
            'verdicts': json.loads(self.verdicts) if self.verdicts else {},
            'failed': self.failed,
            'elapsed_seconds': self.elapsed_seconds,
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }


class DailyStatistic(Base):
    __tablename__ = 'daily_statistics'

    id = Column(Integer, primary_key=True)
    date = Column(DateTime, default=datetime.utcnow)
    runs = Column(Integer, default=0)
    failures = Column(Integer, default=0)
    command_counts = Column(Text)  # JSON object with per-command counts

    def to_dict(self):
        return {
            'id': self.id,
            'date': self.date.isoformat() if self.date else None,
            'runs': self.runs,
            'failures': self.failures,
            'command_counts': json.loads(self.command_counts) if self.command_counts else {},
        }


def _ensure_sqlite_directory(db_url: str):
    prefix = 'sqlite:///'
    if db_url.startswith(prefix) and len(db_url) > len(prefix):
        directory = os.path.dirname(db_url[len(prefix):])
        if directory:
            os.makedirs(directory, exist_ok=True)


class Database:
    def __init__(self, db_url=None):
        db_url = db_url or load_config()['db_url']
        _ensure_sqlite_directory(db_url)
        self.engine = create_engine(db_url, echo=False)
        Base.metadata.create_all(self.engine)
        Session = sessionmaker(bind=self.engine)
        self.session = Session()

    @contextmanager
    def get_session(self):
        """Context manager for database sessions."""
        session = self.session
        try:
            yield session
            session.commit()
        except Exception:
            session.rollback()
            raise

    def add_report(self, report, exit_status: int):
        """Append one run to the ledger."""
        record = ReportRecord(
            command=report.command,
            input_names=json.dumps([i['name'] for i in report.inputs]),
            input_digests=json.dumps([i['sha256'] for i in report.inputs]),
            report_digest=report.digest(),
            exit_status=exit_status,
            verdicts=json.dumps(report.verdicts),
            failed=report.failed,
            elapsed_seconds=report.elapsed_seconds,
        )
        with self.get_session() as session:
            session.add(record)
        logger.debug(f"Ledger: stored {report.command} run {record.id}")
        return record

    def get_recent_reports(self, days=7, limit=20):
        """Get runs from the last N days, newest first."""
        cutoff = datetime.utcnow() - timedelta(days=days)
        return self.session.query(ReportRecord).filter(
            ReportRecord.created_at >= cutoff
        ).order_by(ReportRecord.created_at.desc(), ReportRecord.id.desc()).limit(limit).all()

    def get_reports_since(self, since: datetime):
        return self.session.query(ReportRecord).filter(ReportRecord.created_at >= since).all()

    def get_statistics(self, days=30):
        """Get daily statistics for last N days."""
        cutoff = datetime.utcnow() - timedelta(days=days)
        return self.session.query(DailyStatistic).filter(
            DailyStatistic.date >= cutoff
        ).order_by(DailyStatistic.date.desc()).all()

    def close(self):
        """Close database connection."""
        self.session.close()
        self.engine.dispose()
