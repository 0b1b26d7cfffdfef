#pragma once

#include <string>
#include <vector>

#include "qplan/domain.hpp"

namespace qplan {

/// Rooms 1..n in a row; between rooms j and j+1 either the left door is open
/// (left-open-j) or the right one, unknown initially. Requires n >= 2.
std::string rooms_domain(int n);
ProblemInstance gen_rooms(int n);

/// Blocks world over n blocks (2..5) starting from every legal configuration;
/// goal: the stack A on B on ... with the last block on the table. Facts
/// conXY (onXY and clearX) are defined and observable.
std::string blocks_domain(int n);
ProblemInstance gen_blocks(int n);

/// Supports (-1 for the table) of each block in every legal configuration.
std::vector<std::vector<int>> blocks_configurations(int n);

/// The two-block instance used as the running example: operators without the
/// clear-mover precondition, observables ontableA clearA onAB, goal onAB.
std::string two_blocks_domain();

/// Traveller with 1000DM choosing a city, food in exactly one of them.
std::string example43_domain();

}  // namespace qplan
