void f(int n, int x) {
    int y = 0;
    for (int i = 0; i < n; i++) {
        y += x;
        x -= 1;
    }
}
