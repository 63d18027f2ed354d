"""Turns a validated ScenarioConfig into model objects and runs it."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..control_utils.control import ControlGains, ScalarPlant
from ..control_utils.dynamics import AttitudeReference, Quaternion, RigidBody
from ..control_utils.observer import ObserverConfig
from ..control_utils.sliding import ClassicalSurface, PtSlidingSpec
from .scenario import DisturbanceModel, SimConfig, run_attitude_scenario, run_scalar_scenario


@dataclass(frozen=True)
class Scenario:
    config: object
    spec: PtSlidingSpec
    gains: ControlGains
    dist: DisturbanceModel
    sim: SimConfig
    plant: Optional[ScalarPlant] = None
    surf: Optional[ClassicalSurface] = None
    body: Optional[RigidBody] = None
    ref: Optional[AttitudeReference] = None
    obs_cfg: Optional[ObserverConfig] = None

    @property
    def is_attitude(self):
        return self.config.scenario == "attitude"

    @classmethod
    def build(cls, config):
        spec = PtSlidingSpec.build(config.order, config.eta, config.t_f, config.delta)
        gains = ControlGains(config.K, config.K1, config.phi)
        sim = SimConfig(config.dt, config.t_end, config.renorm, config.record_stride)
        if config.scenario != "attitude":
            return cls(
                config,
                spec,
                gains,
                DisturbanceModel.sinusoid((config.dist_amp,), config.dist_omega),
                sim,
                plant=ScalarPlant.chain_integrator(),
                surf=ClassicalSurface(config.a),
            )
        dist = DisturbanceModel.sinusoid((config.dist_amp,) * 3, config.dist_omega)
        if config.ref_rate:
            ref = AttitudeReference.spin((0.0, 0.0, 1.0), config.ref_rate)
        else:
            ref = AttitudeReference.constant()
        return cls(
            config,
            spec,
            gains,
            dist,
            sim,
            body=RigidBody.diagonal(*config.J),
            ref=ref,
            obs_cfg=ObserverConfig(config.L, dist.rate_bound(), config.e0_bound),
        )

    def run(self):
        if self.is_attitude:
            return run_attitude_scenario(
                self.body,
                Quaternion.from_array(self.config.q0),
                np.asarray(self.config.w0, dtype=float),
                self.ref,
                self.dist,
                self.obs_cfg,
                self.spec,
                self.gains,
                self.sim,
            )
        return run_scalar_scenario(
            self.config.order,
            self.spec,
            self.gains,
            self.plant,
            self.dist,
            self.sim,
            self.config.x0,
            self.surf,
        )
