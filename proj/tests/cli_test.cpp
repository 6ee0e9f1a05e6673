#include <doctest.h>

TEST_CASE("cli placeholder") { CHECK(true); }
