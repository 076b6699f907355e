"""Larmor-clock sojourn times for spin-1/2 scattering off 1D potentials."""
from .clock import (SojournReport, SpinExpectation, TransmissionSpinor, corrected_spin_of_zeta,
                    corrected_sy_of_zeta, corrected_sz_of_zeta, corrected_tau, corrected_tau_y,
                    corrected_tau_y_fd, corrected_tau_y_rect, corrected_tau_z, corrected_tau_z_fd,
                    corrected_tau_z_rect, naive_tau, naive_tau_rect_closed_form, rect_partials,
                    rect_report, sojourn_report, spin_expectation)
from .potential import (ClockWindow, Particle, PotentialProfile, Segment, Spike, UnitSystem,
                        barrier_from_groups, build_delta_dimer, build_rect_barrier)
from .reference import (ReferenceTimes, buttiker_landauer, dwell_time, reference_times,
                        semiclassical_time, wigner_delay)
from .scattering import (ChannelScattering, ChannelWavevector, PartialCoefficients, barrier_partials,
                         channel_wavevector, interface_coeffs, rect_barrier_transmission,
                         transfer_matrix_scatter)

__version__ = "0.1.0"
