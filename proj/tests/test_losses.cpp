#include <doctest.h>

TEST_SUITE("losses") {

}  // TEST_SUITE
