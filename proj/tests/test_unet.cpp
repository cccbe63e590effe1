#include <doctest.h>

TEST_SUITE("unet") {

}  // TEST_SUITE
