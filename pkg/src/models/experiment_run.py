from sqlalchemy import Column, String, Integer, Float, DateTime, ForeignKey, Enum, Uuid
from sqlalchemy.orm import relationship
import uuid
from datetime import datetime
from .base import Base

class ExperimentRun(Base):
    __tablename__ = 'experiment_runs'

    id = Column(Uuid(as_uuid=True), primary_key=True, default=uuid.uuid4)
    kind = Column(Enum('estimate', 'threshold', name='experiment_kinds'), nullable=False)
    n = Column(Integer, nullable=False)
    pattern_r = Column(Integer, nullable=False)
    pattern_s = Column(Integer, nullable=False)
    trials = Column(Integer, nullable=False)
    # Seeds are unsigned 64-bit and overflow a signed BIGINT
    seed = Column(String(20), nullable=False)

    # estimate runs
    p = Column(Float)
    fraction = Column(Float)

    # threshold runs
    p_hat = Column(Float)
    bracket_lo = Column(Float)
    bracket_hi = Column(Float)
    rel_tol = Column(Float)

    ci_lo = Column(Float)
    ci_hi = Column(Float)
    created_at = Column(DateTime, default=datetime.utcnow)

    probes = relationship(
        "ProbeRecord",
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="ProbeRecord.index",
    )

class ProbeRecord(Base):
    __tablename__ = 'probe_records'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Uuid(as_uuid=True), ForeignKey('experiment_runs.id', ondelete="CASCADE"), nullable=False)
    index = Column(Integer, nullable=False)
    kind = Column(Enum('bracket', 'bisect', name='probe_kinds'), nullable=False)
    p = Column(Float, nullable=False)
    fraction = Column(Float, nullable=False)
    ci_lo = Column(Float)
    ci_hi = Column(Float)

    run = relationship("ExperimentRun", back_populates="probes")
