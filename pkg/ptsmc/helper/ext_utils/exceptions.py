class DomainError(ValueError):
    """Arguments lie outside the admissible domain of the operation"""

    pass


class WrongRegimeError(DomainError):
    """Prescribed-phase quantity requested at or after the switch instant t_f - delta"""

    pass


class DisturbanceBoundError(DomainError):
    """Switching gain does not dominate the matched disturbance bound"""

    pass


class SingularPlantError(ArithmeticError):
    """Control effectiveness is (numerically) singular at the current state"""

    def __init__(self, message, t=None):
        self.t = t
        if t is not None:
            message = f"{message} (t={t:.6g}s)"
        super().__init__(message)


class AttitudeSingularityError(SingularPlantError):
    """Attitude matrix T(q) is near singular, |q4| below the guard"""

    pass


class NumericalBlowupError(ArithmeticError):
    """Integrator produced a non-finite rate"""

    def __init__(self, t, diagnostic):
        self.t = t
        self.diagnostic = diagnostic
        super().__init__(f"Non-finite rate at t={t:.6g}s: {diagnostic}")


class ConfigParseError(ValueError):
    """Malformed line in a key = value configuration file"""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class ConfigValidationError(ValueError):
    """Configuration value violates a precondition"""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
