void f(int n, int x, int y) {
    for (int i = 0; i < n; i++) {
        x += y;
        y -= 1;
        x -= i;
    }
    y += x;
}
