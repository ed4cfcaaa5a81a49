#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cvis/channel.hpp"
#include "cvis/order.hpp"

namespace cvis::fixtures {

struct Fixture {
    std::string name;
    Channel channel;
    std::vector<Point> visible;
    std::vector<Point> blocked;
};

// Channel from a closed vertex loop; sigma is the edge v0 -> v1 and the
// boundary runs v1 -> v2 -> ... -> v0. bulges[i] belongs to edge i.
Channel polygon_channel(const std::vector<Point>& verts, const std::vector<double>& bulges = {});

Fixture unit_square();
Fixture hook(double top_bulge = 0.0);
Fixture spiral(int half_turns = 5);
// Channel whose visibility arc touches the boundary at many points.
Fixture critical(int m = 6);

std::vector<Fixture> all_fixtures();

// Every segment, lines included, turned into a near-straight arc with
// |bulge| = magnitude (sign kept, lines bend left).
Channel near_straight(const Channel& ch, double magnitude);

// Star-shaped random channel with n boundary segments and small bulges.
Channel random_star(int n, std::uint64_t seed);
// Random channel with winding corridors; tends to produce blocked points.
Channel random_meander(int n, std::uint64_t seed);

Point random_interior_point(const Channel& ch, std::mt19937_64& rng);

// Random element of the connecting-arc family for p, with closure starts
// at the ends of sigma taken with probability closure_prob.
ConnectingArc random_connecting_arc(const ArcSegment& sigma, Point p, std::mt19937_64& rng,
                                    double closure_prob = 0.1);

// Boundary vertices moved by at most magnitude in random directions,
// keeping sigma fixed; retries until the channel validates.
Channel perturb(const Channel& ch, double magnitude, std::uint64_t seed);

}  // namespace cvis::fixtures
