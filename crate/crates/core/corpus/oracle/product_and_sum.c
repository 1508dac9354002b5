void f(int x, int y, int z) {
    z = x * y + z;
    x = z * 2 + y;
    y = x + y + z;
}
