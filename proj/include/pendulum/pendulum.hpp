#pragma once

#include <pendulum/error.hpp>
#include <pendulum/series.hpp>
#include <pendulum/energy.hpp>
#include <pendulum/elliptic.hpp>
#include <pendulum/convergence.hpp>
#include <pendulum/resummation.hpp>
#include <pendulum/trajectory.hpp>
#include <pendulum/validation.hpp>
#include <pendulum/commands.hpp>
